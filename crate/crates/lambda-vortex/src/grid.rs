//! Transverse-plane sampling of beam and medium quantities.
//!
//! Maps are square Cartesian grids centered on the vortex axis, sampled at
//! pixel centers so the singular phase at r = 0 is never evaluated on-axis
//! with finite amplitude. Evaluation is row-parallel and bit-deterministic:
//! identical inputs produce identical bytes regardless of worker count,
//! because every pixel is a pure function of its coordinates and the
//! per-distance transfer matrix.
//!
//! Each map carries a JSON provenance block (the effective state, medium,
//! beam, and grid parameters plus the sampling distance), so any file can be
//! regenerated from its own metadata.

use crate::beam::{self, PolarCoordinate, VortexBeamSpec};
use crate::bloch::{
    self, BlochError, FieldPair, MediumConfig, PreparedState, SmallXPolicy, TransitionParams,
};
use crate::polarimetry::{self, StokesSample};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Susceptibility denominators below this fraction of the map's largest
/// field amplitude are reported as undefined (NaN sentinel).
pub const SUSCEPTIBILITY_FLOOR_FRACTION: f64 = 1e-12;

/// Pixels with S₀ below this fraction of the map maximum have no defined
/// polarization angles.
pub const STOKES_FLOOR_FRACTION: f64 = 1e-9;

/// Default azimuthal sample count for ring extraction.
pub const DEFAULT_RING_SAMPLES: usize = 720;

/// Square transverse grid: `n` samples per axis spanning ±`extent` beam
/// waists around the vortex axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    extent: f64,
}

impl GridSpec {
    pub const DEFAULT_N: usize = 512;
    pub const DEFAULT_EXTENT: f64 = 3.0;

    pub fn new(n: usize, extent: f64) -> Result<Self, BlochError> {
        if n < 16 {
            return Err(BlochError::InvalidParameter(
                "grid needs at least 16 samples per axis",
            ));
        }
        if !extent.is_finite() || extent <= 0.0 {
            return Err(BlochError::InvalidParameter(
                "grid extent must be finite and positive",
            ));
        }
        Ok(Self { n, extent })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn pixel_count(&self) -> usize {
        self.n * self.n
    }

    /// Pixel-center coordinate along one axis, in waist units.
    pub fn axis_coordinate(&self, index: usize) -> f64 {
        -self.extent + (index as f64 + 0.5) * (2.0 * self.extent / self.n as f64)
    }
}

/// What a map file contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Field,
    Absorption,
    Stokes,
}

/// Everything needed to regenerate a map, embedded verbatim in each file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapProvenance {
    pub kind: MapKind,
    pub c1: f64,
    pub c2_re: f64,
    pub c2_im: f64,
    pub alpha_r: f64,
    pub gamma_r: f64,
    pub delta_r: f64,
    pub alpha_l: f64,
    pub gamma_l: f64,
    pub delta_l: f64,
    pub length: f64,
    pub charge: i32,
    pub waist: f64,
    pub theta: f64,
    pub psi: f64,
    pub epsilon: f64,
    pub grid_n: u32,
    pub grid_extent: f64,
    pub z: f64,
}

impl MapProvenance {
    pub fn gather(
        kind: MapKind,
        state: &PreparedState,
        medium: &MediumConfig,
        beam_spec: &VortexBeamSpec,
        grid: &GridSpec,
        z: f64,
    ) -> Self {
        Self {
            kind,
            c1: state.c1(),
            c2_re: state.c2().re,
            c2_im: state.c2().im,
            alpha_r: medium.transition_r().alpha(),
            gamma_r: medium.transition_r().gamma(),
            delta_r: medium.transition_r().delta(),
            alpha_l: medium.transition_l().alpha(),
            gamma_l: medium.transition_l().gamma(),
            delta_l: medium.transition_l().delta(),
            length: medium.length(),
            charge: beam_spec.charge(),
            waist: beam_spec.waist(),
            theta: beam_spec.theta(),
            psi: beam_spec.psi(),
            epsilon: beam_spec.epsilon(),
            grid_n: grid.n() as u32,
            grid_extent: grid.extent(),
            z,
        }
    }

    pub fn to_metadata_string(&self) -> String {
        serde_json::to_string(self).expect("provenance serializes")
    }

    pub fn from_metadata_str(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Rebuilds the prepared state with the exact stored amplitudes.
    pub fn state(&self) -> Result<PreparedState, BlochError> {
        PreparedState::from_parts(self.c1, C64::new(self.c2_re, self.c2_im))
    }

    pub fn medium(&self) -> Result<MediumConfig, BlochError> {
        MediumConfig::new(
            TransitionParams::new(self.alpha_r, self.gamma_r, self.delta_r)?,
            TransitionParams::new(self.alpha_l, self.gamma_l, self.delta_l)?,
            self.length,
        )
    }

    pub fn beam(&self) -> Result<VortexBeamSpec, BlochError> {
        VortexBeamSpec::new(self.charge, self.waist, self.theta, self.psi, self.epsilon)
    }

    pub fn grid(&self) -> Result<GridSpec, BlochError> {
        GridSpec::new(self.grid_n as usize, self.grid_extent)
    }
}

/// Complex right/left field samples on a transverse grid at one distance.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    grid: GridSpec,
    z: f64,
    waist: f64,
    omega_r: Vec<C64>,
    omega_l: Vec<C64>,
    metadata: String,
}

impl FieldMap {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Beam waist used to scale the grid's waist-unit coordinates.
    pub fn waist(&self) -> f64 {
        self.waist
    }

    /// Row-major samples, row index along y, column index along x.
    pub fn omega_r(&self) -> &[C64] {
        &self.omega_r
    }

    pub fn omega_l(&self) -> &[C64] {
        &self.omega_l
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn provenance(&self) -> Result<MapProvenance, serde_json::Error> {
        MapProvenance::from_metadata_str(&self.metadata)
    }

    pub fn at(&self, row: usize, col: usize) -> FieldPair {
        let idx = row * self.grid.n() + col;
        FieldPair::new(self.omega_r[idx], self.omega_l[idx])
    }

    /// |Ω_R|² per pixel.
    pub fn intensity_r(&self) -> Vec<f64> {
        self.omega_r.iter().map(|w| w.norm_sqr()).collect()
    }

    /// |Ω_L|² per pixel.
    pub fn intensity_l(&self) -> Vec<f64> {
        self.omega_l.iter().map(|w| w.norm_sqr()).collect()
    }

    /// |Ω_R|² + |Ω_L|² per pixel.
    pub fn intensity_total(&self) -> Vec<f64> {
        self.omega_r
            .iter()
            .zip(&self.omega_l)
            .map(|(r, l)| r.norm_sqr() + l.norm_sqr())
            .collect()
    }

    /// Largest single-component amplitude on the map.
    pub fn max_amplitude(&self) -> f64 {
        self.omega_r
            .iter()
            .chain(&self.omega_l)
            .map(|w| w.norm())
            .fold(0.0, f64::max)
    }

    pub fn from_parts(
        grid: GridSpec,
        z: f64,
        waist: f64,
        omega_r: Vec<C64>,
        omega_l: Vec<C64>,
        metadata: String,
    ) -> Result<Self, BlochError> {
        if omega_r.len() != grid.pixel_count() || omega_l.len() != grid.pixel_count() {
            return Err(BlochError::InvalidParameter(
                "field plane length does not match grid",
            ));
        }
        Ok(Self {
            grid,
            z,
            waist,
            omega_r,
            omega_l,
            metadata,
        })
    }
}

/// Complex susceptibility samples per component; undefined pixels (field
/// below the floor) carry NaN sentinels.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionMap {
    grid: GridSpec,
    z: f64,
    waist: f64,
    chi_r: Vec<C64>,
    chi_l: Vec<C64>,
    metadata: String,
}

impl AbsorptionMap {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn chi_r(&self) -> &[C64] {
        &self.chi_r
    }

    pub fn chi_l(&self) -> &[C64] {
        &self.chi_l
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    /// Absorption profile Im[χ_R]; NaN where undefined.
    pub fn im_chi_r(&self) -> Vec<f64> {
        self.chi_r.iter().map(|c| c.im).collect()
    }

    pub fn im_chi_l(&self) -> Vec<f64> {
        self.chi_l.iter().map(|c| c.im).collect()
    }

    pub fn from_parts(
        grid: GridSpec,
        z: f64,
        waist: f64,
        chi_r: Vec<C64>,
        chi_l: Vec<C64>,
        metadata: String,
    ) -> Result<Self, BlochError> {
        if chi_r.len() != grid.pixel_count() || chi_l.len() != grid.pixel_count() {
            return Err(BlochError::InvalidParameter(
                "susceptibility plane length does not match grid",
            ));
        }
        Ok(Self {
            grid,
            z,
            waist,
            chi_r,
            chi_l,
            metadata,
        })
    }
}

/// Per-pixel Stokes samples at one distance.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesMap {
    grid: GridSpec,
    z: f64,
    waist: f64,
    samples: Vec<StokesSample>,
    metadata: String,
}

impl StokesMap {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn samples(&self) -> &[StokesSample] {
        &self.samples
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn defined_count(&self) -> usize {
        self.samples.iter().filter(|s| s.zeta.is_some()).count()
    }

    /// Mean ellipticity angle over defined pixels.
    pub fn mean_zeta(&self) -> Option<f64> {
        mean(self.samples.iter().filter_map(|s| s.zeta))
    }

    /// Mean of S₃/S₀ (the sine of twice the ellipticity) over defined
    /// pixels.
    pub fn mean_ellipticity_sine(&self) -> Option<f64> {
        mean(
            self.samples
                .iter()
                .filter(|s| s.zeta.is_some())
                .map(|s| s.s3 / s.s0),
        )
    }

    /// Mean S₃ over defined pixels (intensity-weighted handedness).
    pub fn mean_s3(&self) -> Option<f64> {
        mean(self.samples.iter().filter(|s| s.zeta.is_some()).map(|s| s.s3))
    }

    /// Fraction of defined pixels with |ζ| below `tol`.
    pub fn linear_fraction(&self, tol: f64) -> f64 {
        let defined = self.defined_count();
        if defined == 0 {
            return 0.0;
        }
        let linear = self
            .samples
            .iter()
            .filter_map(|s| s.zeta)
            .filter(|z| z.abs() < tol)
            .count();
        linear as f64 / defined as f64
    }

    pub fn s_planes(&self) -> [Vec<f64>; 4] {
        [
            self.samples.iter().map(|s| s.s0).collect(),
            self.samples.iter().map(|s| s.s1).collect(),
            self.samples.iter().map(|s| s.s2).collect(),
            self.samples.iter().map(|s| s.s3).collect(),
        ]
    }

    /// Rebuilds a map from stored Stokes planes; the ellipse angles and
    /// classes are recomputed with the same floor rule, which reproduces
    /// the original samples bit for bit.
    pub fn from_planes(
        grid: GridSpec,
        z: f64,
        waist: f64,
        planes: [Vec<f64>; 4],
        metadata: String,
    ) -> Result<Self, BlochError> {
        let count = grid.pixel_count();
        if planes.iter().any(|p| p.len() != count) {
            return Err(BlochError::InvalidParameter(
                "stokes plane length does not match grid",
            ));
        }
        let [s0, s1, s2, s3] = planes;
        let max_s0 = s0.iter().cloned().fold(0.0, f64::max);
        let floor = STOKES_FLOOR_FRACTION * max_s0;
        let samples = (0..count)
            .map(|i| rebuild_sample(s0[i], s1[i], s2[i], s3[i], floor))
            .collect();
        Ok(Self {
            grid,
            z,
            waist,
            samples,
            metadata,
        })
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn rebuild_sample(s0: f64, s1: f64, s2: f64, s3: f64, floor: f64) -> StokesSample {
    if s0 > floor && s0.is_finite() {
        let zeta = 0.5 * (s3 / s0).clamp(-1.0, 1.0).asin();
        let xi = polarimetry::wrap_orientation(0.5 * s2.atan2(s1));
        StokesSample {
            s0,
            s1,
            s2,
            s3,
            zeta: Some(zeta),
            xi: Some(xi),
            class: polarimetry::classify(zeta, polarimetry::DEFAULT_CLASS_TOLERANCE),
        }
    } else {
        StokesSample {
            s0,
            s1,
            s2,
            s3,
            zeta: None,
            xi: None,
            class: crate::polarimetry::PolarizationClass::Undefined,
        }
    }
}

/// Propagates the entrance beam to `z` at every grid pixel.
pub fn evaluate_field_map(
    state: &PreparedState,
    medium: &MediumConfig,
    beam_spec: &VortexBeamSpec,
    grid: &GridSpec,
    z: f64,
) -> Result<FieldMap, BlochError> {
    let transfer = bloch::transfer_matrix(state, medium, z, SmallXPolicy::Series)?;
    let n = grid.n();
    let waist = beam_spec.waist();
    let mut omega_r = vec![C64::new(0.0, 0.0); grid.pixel_count()];
    let mut omega_l = vec![C64::new(0.0, 0.0); grid.pixel_count()];

    omega_r
        .par_chunks_mut(n)
        .zip(omega_l.par_chunks_mut(n))
        .enumerate()
        .for_each(|(row, (out_r, out_l))| {
            let y = grid.axis_coordinate(row) * waist;
            for col in 0..n {
                let x = grid.axis_coordinate(col) * waist;
                let p = PolarCoordinate::from_cartesian(x, y);
                let entrance = beam::input_fields(beam_spec, &p);
                let out = bloch::apply_transfer(&transfer, &entrance);
                out_r[col] = out.omega_r;
                out_l[col] = out.omega_l;
            }
        });

    let metadata =
        MapProvenance::gather(MapKind::Field, state, medium, beam_spec, grid, z)
            .to_metadata_string();
    FieldMap::from_parts(*grid, z, waist, omega_r, omega_l, metadata)
}

/// Susceptibility map at `z`: fields are propagated per pixel, then each
/// component's χ = ρ/Ω is evaluated with the undefined floor taken relative
/// to the largest field amplitude on the map.
pub fn evaluate_absorption_map(
    state: &PreparedState,
    medium: &MediumConfig,
    beam_spec: &VortexBeamSpec,
    grid: &GridSpec,
    z: f64,
) -> Result<AbsorptionMap, BlochError> {
    let fields = evaluate_field_map(state, medium, beam_spec, grid, z)?;
    let floor = SUSCEPTIBILITY_FLOOR_FRACTION * fields.max_amplitude();
    let n = grid.n();
    let undefined = C64::new(f64::NAN, f64::NAN);
    let mut chi_r = vec![undefined; grid.pixel_count()];
    let mut chi_l = vec![undefined; grid.pixel_count()];

    chi_r
        .par_chunks_mut(n)
        .zip(chi_l.par_chunks_mut(n))
        .enumerate()
        .for_each(|(row, (out_r, out_l))| {
            for col in 0..n {
                let pair = fields.at(row, col);
                let (r, l) = bloch::susceptibilities(state, medium, &pair, floor);
                out_r[col] = r.unwrap_or(undefined);
                out_l[col] = l.unwrap_or(undefined);
            }
        });

    let metadata =
        MapProvenance::gather(MapKind::Absorption, state, medium, beam_spec, grid, z)
            .to_metadata_string();
    AbsorptionMap::from_parts(*grid, z, beam_spec.waist(), chi_r, chi_l, metadata)
}

/// Pixelwise Stokes analysis of a field map. The polarization floor is
/// relative to the largest S₀ on the map.
pub fn evaluate_stokes_map(field_map: &FieldMap) -> StokesMap {
    let n = field_map.grid().n();
    let max_s0 = field_map
        .intensity_total()
        .into_iter()
        .fold(0.0, f64::max);
    let floor = STOKES_FLOOR_FRACTION * max_s0;
    let mut samples = vec![
        StokesSample {
            s0: 0.0,
            s1: 0.0,
            s2: 0.0,
            s3: 0.0,
            zeta: None,
            xi: None,
            class: crate::polarimetry::PolarizationClass::Undefined,
        };
        field_map.grid().pixel_count()
    ];
    samples
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(row, out)| {
            for (col, slot) in out.iter_mut().enumerate() {
                *slot = polarimetry::stokes_with_floor(&field_map.at(row, col), floor);
            }
        });

    let metadata = match field_map.provenance() {
        Ok(mut prov) => {
            prov.kind = MapKind::Stokes;
            prov.to_metadata_string()
        }
        Err(_) => field_map.metadata().to_string(),
    };
    StokesMap {
        grid: *field_map.grid(),
        z: field_map.z(),
        waist: field_map.waist(),
        samples,
        metadata,
    }
}

/// Bilinearly interpolates a real plane around the circle r = `radius`
/// (physical units), returning `samples` values at uniformly spaced
/// azimuths starting from φ = 0.
pub fn ring_profile(
    plane: &[f64],
    grid: &GridSpec,
    waist: f64,
    radius: f64,
    samples: usize,
) -> Vec<f64> {
    assert_eq!(plane.len(), grid.pixel_count(), "plane does not match grid");
    let n = grid.n();
    let pixels_per_waist = n as f64 / (2.0 * grid.extent());
    (0..samples)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let xw = radius / waist * phi.cos();
            let yw = radius / waist * phi.sin();
            let u = (xw + grid.extent()) * pixels_per_waist - 0.5;
            let v = (yw + grid.extent()) * pixels_per_waist - 0.5;
            bilinear(plane, n, u, v)
        })
        .collect()
}

fn bilinear(plane: &[f64], n: usize, u: f64, v: f64) -> f64 {
    let clamp = |w: f64| w.clamp(0.0, (n - 1) as f64);
    let (u, v) = (clamp(u), clamp(v));
    let u0 = u.floor() as usize;
    let v0 = v.floor() as usize;
    let u1 = (u0 + 1).min(n - 1);
    let v1 = (v0 + 1).min(n - 1);
    let fu = u - u0 as f64;
    let fv = v - v0 as f64;
    let at = |row: usize, col: usize| plane[row * n + col];
    let top = at(v0, u0) * (1.0 - fu) + at(v0, u1) * fu;
    let bottom = at(v1, u0) * (1.0 - fu) + at(v1, u1) * fu;
    top * (1.0 - fv) + bottom * fv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarimetry::{count_azimuthal_windows, PolarizationClass, RingFeature};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn balanced_setup(l: i32, theta: f64, psi: f64) -> (PreparedState, MediumConfig, VortexBeamSpec) {
        (
            PreparedState::balanced(),
            MediumConfig::symmetric(20.0, 1.0, 0.0, 1.0).unwrap(),
            VortexBeamSpec::new(l, 1.0, theta, psi, 0.05).unwrap(),
        )
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(8, 3.0).is_err());
        assert!(GridSpec::new(16, 0.0).is_err());
        let g = GridSpec::new(64, 3.0).unwrap();
        // Pixel centers are symmetric about the axis.
        assert!((g.axis_coordinate(0) + g.axis_coordinate(63)).abs() <= 1e-15);
    }

    #[test]
    fn entrance_map_matches_direct_sampling() {
        let (state, medium, beam_spec) = balanced_setup(1, FRAC_PI_4, 0.0);
        let grid = GridSpec::new(32, 3.0).unwrap();
        let map = evaluate_field_map(&state, &medium, &beam_spec, &grid, 0.0).unwrap();
        for row in [0usize, 7, 16, 31] {
            for col in [0usize, 5, 16, 30] {
                let x = grid.axis_coordinate(col);
                let y = grid.axis_coordinate(row);
                let p = PolarCoordinate::from_cartesian(x, y);
                let direct = beam::input_fields(&beam_spec, &p);
                let sampled = map.at(row, col);
                assert_eq!(sampled.omega_r, direct.omega_r);
                assert_eq!(sampled.omega_l, direct.omega_l);
            }
        }
    }

    #[test]
    fn map_evaluation_is_deterministic() {
        let (state, medium, beam_spec) = balanced_setup(2, FRAC_PI_4, 0.0);
        let grid = GridSpec::new(16, 3.0).unwrap();
        let a = evaluate_field_map(&state, &medium, &beam_spec, &grid, 0.7).unwrap();
        let b = evaluate_field_map(&state, &medium, &beam_spec, &grid, 0.7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let (state, medium, beam_spec) = balanced_setup(2, FRAC_PI_4, 1.3);
        let grid = GridSpec::new(48, 3.0).unwrap();
        let reference = evaluate_field_map(&state, &medium, &beam_spec, &grid, 0.4).unwrap();
        for workers in [1usize, 2, 7] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            let map = pool
                .install(|| evaluate_field_map(&state, &medium, &beam_spec, &grid, 0.4))
                .unwrap();
            assert_eq!(map, reference, "workers={workers}");
        }
    }

    #[test]
    fn transparent_medium_keeps_entrance_fields() {
        let state = PreparedState::balanced();
        let medium = MediumConfig::symmetric(0.0, 1.0, 0.0, 1.0).unwrap();
        let beam_spec = VortexBeamSpec::new(1, 1.0, FRAC_PI_4, 0.0, 0.05).unwrap();
        let grid = GridSpec::new(32, 3.0).unwrap();
        let entrance = evaluate_field_map(&state, &medium, &beam_spec, &grid, 0.0).unwrap();
        let deep = evaluate_field_map(&state, &medium, &beam_spec, &grid, 5.0).unwrap();
        assert_eq!(entrance.omega_r(), deep.omega_r());
        assert_eq!(entrance.omega_l(), deep.omega_l());
    }

    #[test]
    fn absorption_map_transparent_medium_is_frozen() {
        // Zero optical depth leaves the fields at their entrance values, so
        // the susceptibility pattern exists but never evolves with z.
        let state = PreparedState::balanced();
        let medium = MediumConfig::symmetric(0.0, 1.0, 0.0, 1.0).unwrap();
        let beam_spec = VortexBeamSpec::new(1, 1.0, FRAC_PI_4, 0.0, 0.05).unwrap();
        let grid = GridSpec::new(32, 3.0).unwrap();
        let entrance = evaluate_absorption_map(&state, &medium, &beam_spec, &grid, 0.0).unwrap();
        let deep = evaluate_absorption_map(&state, &medium, &beam_spec, &grid, 5.0).unwrap();
        assert_eq!(entrance.chi_r(), deep.chi_r());
        assert_eq!(entrance.chi_l(), deep.chi_l());
    }

    #[test]
    fn absorption_map_missing_component_is_all_sentinel() {
        // theta = 0 puts all the power in the left-handed beam; the
        // right-handed susceptibility ratio is undefined everywhere.
        let state = PreparedState::balanced();
        let medium = MediumConfig::symmetric(20.0, 1.0, 0.0, 1.0).unwrap();
        let beam_spec = VortexBeamSpec::new(1, 1.0, 0.0, 0.0, 0.05).unwrap();
        let grid = GridSpec::new(32, 3.0).unwrap();
        let map = evaluate_absorption_map(&state, &medium, &beam_spec, &grid, 0.0).unwrap();
        assert!(map.chi_r().iter().all(|c| !c.is_finite()));
        assert!(map.chi_l().iter().filter(|c| c.is_finite()).count() > 0);
    }

    #[test]
    fn absorption_ring_shows_topology_windows() {
        let (state, medium, beam_spec) = balanced_setup(1, FRAC_PI_4, 0.0);
        let grid = GridSpec::new(128, 3.0).unwrap();
        let map = evaluate_absorption_map(&state, &medium, &beam_spec, &grid, 0.0).unwrap();
        let profile = ring_profile(&map.im_chi_r(), &grid, beam_spec.waist(), 1.0, 720);
        let windows = count_azimuthal_windows(&profile, 0.5, RingFeature::Below).unwrap();
        assert_eq!(windows.count, 2);
    }

    #[test]
    fn deep_intensity_map_shows_four_petals() {
        // Charge 2, balanced resonant medium: deep in the medium the ring
        // reshapes into four lobes.
        let (state, medium, beam_spec) = balanced_setup(2, FRAC_PI_4, 0.0);
        let grid = GridSpec::new(256, 3.0).unwrap();
        let z = 20.0 * medium.absorption_length();
        let map = evaluate_field_map(&state, &medium, &beam_spec, &grid, z).unwrap();
        let profile = ring_profile(&map.intensity_total(), &grid, 1.0, 1.0, 720);
        let petals = count_azimuthal_windows(&profile, 0.5, RingFeature::Above).unwrap();
        assert_eq!(petals.count, 4);
    }

    #[test]
    fn stokes_map_balanced_scenario_is_linear() {
        let (state, medium, beam_spec) = balanced_setup(1, FRAC_PI_4, 0.0);
        let grid = GridSpec::new(48, 3.0).unwrap();
        let l_abs = medium.absorption_length();
        for &z in &[0.0, l_abs, 10.0 * l_abs] {
            let fields = evaluate_field_map(&state, &medium, &beam_spec, &grid, z).unwrap();
            let map = evaluate_stokes_map(&fields);
            assert!(map.defined_count() > 0);
            for s in map.samples() {
                if let Some(zeta) = s.zeta {
                    assert!(zeta.abs() <= 1e-12, "zeta={zeta} at z={z}");
                    assert_eq!(s.class, PolarizationClass::Linear);
                }
            }
        }
    }

    #[test]
    fn provenance_round_trip_regenerates_identical_map() {
        let (state, medium, beam_spec) = balanced_setup(2, 0.9, 2.2);
        let grid = GridSpec::new(24, 3.0).unwrap();
        let map = evaluate_field_map(&state, &medium, &beam_spec, &grid, 1.1).unwrap();
        let prov = map.provenance().unwrap();
        let again = evaluate_field_map(
            &prov.state().unwrap(),
            &prov.medium().unwrap(),
            &prov.beam().unwrap(),
            &prov.grid().unwrap(),
            prov.z,
        )
        .unwrap();
        assert_eq!(map, again);
    }

    #[test]
    fn ring_profile_interpolates_smooth_plane() {
        let grid = GridSpec::new(128, 3.0).unwrap();
        let n = grid.n();
        // Plane f(x, y) = x + 2y is reproduced exactly by bilinear
        // interpolation.
        let plane: Vec<f64> = (0..n * n)
            .map(|i| {
                let x = grid.axis_coordinate(i % n);
                let y = grid.axis_coordinate(i / n);
                x + 2.0 * y
            })
            .collect();
        let prof = ring_profile(&plane, &grid, 1.0, 1.0, 360);
        for (k, &v) in prof.iter().enumerate() {
            let phi = 2.0 * PI * k as f64 / 360.0;
            let expect = phi.cos() + 2.0 * phi.sin();
            assert!((v - expect).abs() <= 1e-12, "k={k}: {v} vs {expect}");
        }
    }
}
