//! The VVFM binary map container and CSV exports.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic            4 bytes  "VVFM"
//! version          u16      currently 1
//! grid n           u32
//! grid extent      f64      half-width in waist units
//! z                f64      sampling distance
//! component count  u16
//! metadata length  u32
//! metadata         UTF-8 JSON (the map provenance)
//! components       count × n² × (f64 re, f64 im), row-major
//! crc32            u32      over every preceding byte
//! ```
//!
//! Round-trips are bit-exact: the reader returns exactly the bytes the
//! writer produced, including NaN sentinel payloads. Which components a
//! file carries follows from the provenance `kind`: field and absorption
//! maps store two complex planes, Stokes maps store S₀..S₃ with zero
//! imaginary parts.

use crate::grid::{AbsorptionMap, FieldMap, GridSpec, MapKind, MapProvenance, StokesMap};
use num_complex::Complex64 as C64;
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"VVFM";
pub const FORMAT_VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a VVFM file (magic {0:02x?})")]
    BadMagic([u8; 4]),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("file truncated")]
    Truncated,
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("metadata is not valid provenance JSON: {0}")]
    Metadata(#[from] serde_json::Error),
    #[error("component count {got} does not match {expected} expected for this map kind")]
    ComponentCount { expected: u16, got: u16 },
    #[error("inconsistent map shape: {0}")]
    Shape(#[from] crate::bloch::BlochError),
}

/// Any of the three map products, for uniform serialization.
#[derive(Debug, Clone, PartialEq)]
pub enum MapData {
    Field(FieldMap),
    Absorption(AbsorptionMap),
    Stokes(StokesMap),
}

impl MapData {
    pub fn metadata(&self) -> &str {
        match self {
            MapData::Field(m) => m.metadata(),
            MapData::Absorption(m) => m.metadata(),
            MapData::Stokes(m) => m.metadata(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        match self {
            MapData::Field(m) => m.grid(),
            MapData::Absorption(m) => m.grid(),
            MapData::Stokes(m) => m.grid(),
        }
    }

    pub fn z(&self) -> f64 {
        match self {
            MapData::Field(m) => m.z(),
            MapData::Absorption(m) => m.z(),
            MapData::Stokes(m) => m.z(),
        }
    }

    fn components(&self) -> Vec<Vec<C64>> {
        match self {
            MapData::Field(m) => vec![m.omega_r().to_vec(), m.omega_l().to_vec()],
            MapData::Absorption(m) => vec![m.chi_r().to_vec(), m.chi_l().to_vec()],
            MapData::Stokes(m) => m
                .s_planes()
                .into_iter()
                .map(|plane| plane.into_iter().map(|v| C64::new(v, 0.0)).collect())
                .collect(),
        }
    }
}

fn expected_components(kind: MapKind) -> u16 {
    match kind {
        MapKind::Field | MapKind::Absorption => 2,
        MapKind::Stokes => 4,
    }
}

/// Serializes a map to the VVFM byte layout.
pub fn to_bytes(map: &MapData) -> Vec<u8> {
    let grid = map.grid();
    let metadata = map.metadata().as_bytes();
    let components = map.components();
    let mut buf = Vec::with_capacity(
        4 + 2 + 4 + 8 + 8 + 2 + 4 + metadata.len() + components.len() * grid.pixel_count() * 16 + 4,
    );
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    buf.extend_from_slice(&grid.extent().to_le_bytes());
    buf.extend_from_slice(&map.z().to_le_bytes());
    buf.extend_from_slice(&(components.len() as u16).to_le_bytes());
    buf.extend_from_slice(&(metadata.len() as u32).to_le_bytes());
    buf.extend_from_slice(metadata);
    for plane in &components {
        for value in plane {
            buf.extend_from_slice(&value.re.to_le_bytes());
            buf.extend_from_slice(&value.im.to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, count: usize) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(count).ok_or(FormatError::Truncated)?;
        if end > self.bytes.len() {
            return Err(FormatError::Truncated);
        }
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u16(&mut self) -> Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, FormatError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Parses a VVFM byte buffer back into a map.
pub fn from_bytes(bytes: &[u8]) -> Result<MapData, FormatError> {
    if bytes.len() < 4 + 2 + 4 {
        return Err(FormatError::Truncated);
    }
    let mut cur = Cursor { bytes, pos: 0 };
    let magic: [u8; 4] = cur.take(4)?.try_into().unwrap();
    if magic != MAGIC {
        return Err(FormatError::BadMagic(magic));
    }
    let version = cur.u16()?;
    if version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }

    // Validate the trailing checksum before trusting any lengths.
    if bytes.len() < 4 {
        return Err(FormatError::Truncated);
    }
    let body = &bytes[..bytes.len() - 4];
    let stored = u32::from_le_bytes(bytes[bytes.len() - 4..].try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(FormatError::ChecksumMismatch { stored, computed });
    }

    let n = cur.u32()? as usize;
    let extent = cur.f64()?;
    let z = cur.f64()?;
    let component_count = cur.u16()?;
    let metadata_len = cur.u32()? as usize;
    let metadata = std::str::from_utf8(cur.take(metadata_len)?)
        .map_err(|_| FormatError::Truncated)?
        .to_string();
    let provenance = MapProvenance::from_metadata_str(&metadata)?;
    let expected = expected_components(provenance.kind);
    if component_count != expected {
        return Err(FormatError::ComponentCount {
            expected,
            got: component_count,
        });
    }

    let grid = GridSpec::new(n, extent)?;
    let mut components: Vec<Vec<C64>> = Vec::with_capacity(component_count as usize);
    for _ in 0..component_count {
        let mut plane = Vec::with_capacity(grid.pixel_count());
        for _ in 0..grid.pixel_count() {
            let re = cur.f64()?;
            let im = cur.f64()?;
            plane.push(C64::new(re, im));
        }
        components.push(plane);
    }
    if cur.pos != body.len() {
        return Err(FormatError::Truncated);
    }

    let waist = provenance.waist;
    match provenance.kind {
        MapKind::Field => {
            let omega_l = components.pop().unwrap();
            let omega_r = components.pop().unwrap();
            Ok(MapData::Field(FieldMap::from_parts(
                grid, z, waist, omega_r, omega_l, metadata,
            )?))
        }
        MapKind::Absorption => {
            let chi_l = components.pop().unwrap();
            let chi_r = components.pop().unwrap();
            Ok(MapData::Absorption(AbsorptionMap::from_parts(
                grid, z, waist, chi_r, chi_l, metadata,
            )?))
        }
        MapKind::Stokes => {
            let planes: Vec<Vec<f64>> = components
                .into_iter()
                .map(|plane| plane.into_iter().map(|c| c.re).collect())
                .collect();
            let [s0, s1, s2, s3]: [Vec<f64>; 4] = planes.try_into().unwrap();
            Ok(MapData::Stokes(StokesMap::from_planes(
                grid,
                z,
                waist,
                [s0, s1, s2, s3],
                metadata,
            )?))
        }
    }
}

pub fn write_map(path: &Path, map: &MapData) -> Result<(), FormatError> {
    let bytes = to_bytes(map);
    let mut file = fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

pub fn read_map(path: &Path) -> Result<MapData, FormatError> {
    from_bytes(&fs::read(path)?)
}

fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV export of a field map: one row per pixel with physical coordinates
/// and the complex components, 17 significant digits.
pub fn write_field_csv(path: &Path, map: &FieldMap) -> Result<(), FormatError> {
    let mut out = String::from("x,y,omega_r_re,omega_r_im,omega_l_re,omega_l_im\n");
    let n = map.grid().n();
    for row in 0..n {
        let y = map.grid().axis_coordinate(row) * map.waist();
        for col in 0..n {
            let x = map.grid().axis_coordinate(col) * map.waist();
            let f = map.at(row, col);
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sig17(x),
                sig17(y),
                sig17(f.omega_r.re),
                sig17(f.omega_r.im),
                sig17(f.omega_l.re),
                sig17(f.omega_l.im),
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_absorption_csv(path: &Path, map: &AbsorptionMap) -> Result<(), FormatError> {
    let mut out = String::from("x,y,chi_r_re,chi_r_im,chi_l_re,chi_l_im\n");
    let n = map.grid().n();
    for row in 0..n {
        let y = map.grid().axis_coordinate(row) * map.waist();
        for col in 0..n {
            let x = map.grid().axis_coordinate(col) * map.waist();
            let idx = row * n + col;
            let r = map.chi_r()[idx];
            let l = map.chi_l()[idx];
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sig17(x),
                sig17(y),
                sig17(r.re),
                sig17(r.im),
                sig17(l.re),
                sig17(l.im),
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_stokes_csv(path: &Path, map: &StokesMap) -> Result<(), FormatError> {
    let mut out = String::from("x,y,s0,s1,s2,s3,zeta,xi,class\n");
    let n = map.grid().n();
    for row in 0..n {
        let y = map.grid().axis_coordinate(row) * map.waist();
        for col in 0..n {
            let x = map.grid().axis_coordinate(col) * map.waist();
            let s = &map.samples()[row * n + col];
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                sig17(x),
                sig17(y),
                sig17(s.s0),
                sig17(s.s1),
                sig17(s.s2),
                sig17(s.s3),
                s.zeta.map_or_else(|| "nan".into(), sig17),
                s.xi.map_or_else(|| "nan".into(), sig17),
                s.class,
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}
