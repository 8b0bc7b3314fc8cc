//! Quick-look rendering: binary PPM heatmaps of real planes and SVG
//! polarization-glyph overlays on a subsampled lattice.
//!
//! Heatmaps use linear min–max normalization over the finite samples;
//! non-finite (sentinel) pixels render as white background, matching the
//! blank regions of the reference plots. Glyph overlays draw a line for
//! linear polarization and an ellipse otherwise, red for left-handed and
//! blue for right-handed, over an intensity-shaded lattice.

use crate::grid::{GridSpec, StokesMap};
use crate::polarimetry::PolarizationClass;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot render an empty map")]
    EmptyMap,
    #[error("plane length {got} does not match grid ({expected} pixels)")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("glyph lattice must have at least 2 cells per axis")]
    LatticeTooSmall,
}

/// Color maps for heatmaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Palette {
    /// Black → white.
    Gray,
    /// White → black; high values print dark, as in the reference plots.
    GrayInverted,
    /// Perceptually uniform blue→green→yellow.
    Viridis,
}

const BACKGROUND: [u8; 3] = [255, 255, 255];

const VIRIDIS_ANCHORS: [[u8; 3]; 16] = [
    [68, 1, 84],
    [72, 26, 108],
    [71, 47, 125],
    [65, 68, 135],
    [57, 86, 140],
    [49, 104, 142],
    [42, 120, 142],
    [35, 136, 142],
    [31, 152, 139],
    [34, 168, 132],
    [53, 183, 121],
    [84, 197, 104],
    [122, 209, 81],
    [165, 219, 54],
    [210, 226, 27],
    [253, 231, 37],
];

impl Palette {
    fn color(&self, t: f64) -> [u8; 3] {
        let t = t.clamp(0.0, 1.0);
        match self {
            Palette::Gray => {
                let v = (t * 255.0).round() as u8;
                [v, v, v]
            }
            Palette::GrayInverted => {
                let v = ((1.0 - t) * 255.0).round() as u8;
                [v, v, v]
            }
            Palette::Viridis => {
                let scaled = t * (VIRIDIS_ANCHORS.len() - 1) as f64;
                let lo = scaled.floor() as usize;
                let hi = (lo + 1).min(VIRIDIS_ANCHORS.len() - 1);
                let f = scaled - lo as f64;
                let mut rgb = [0u8; 3];
                for (k, channel) in rgb.iter_mut().enumerate() {
                    let a = VIRIDIS_ANCHORS[lo][k] as f64;
                    let b = VIRIDIS_ANCHORS[hi][k] as f64;
                    *channel = (a + (b - a) * f).round() as u8;
                }
                rgb
            }
        }
    }
}

/// Renders a real plane as an 8-bit binary PPM (P6) with linear min–max
/// normalization. Row 0 of the plane is the bottom of the image (+y up).
pub fn render_heatmap(
    plane: &[f64],
    grid: &GridSpec,
    path: &Path,
    palette: Palette,
) -> Result<(), RenderError> {
    if plane.is_empty() {
        return Err(RenderError::EmptyMap);
    }
    if plane.len() != grid.pixel_count() {
        return Err(RenderError::ShapeMismatch {
            expected: grid.pixel_count(),
            got: plane.len(),
        });
    }
    let n = grid.n();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in plane.iter().filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = hi - lo;

    let mut pixels = Vec::with_capacity(n * n * 3);
    for image_row in 0..n {
        let plane_row = n - 1 - image_row;
        for col in 0..n {
            let v = plane[plane_row * n + col];
            let rgb = if !v.is_finite() {
                BACKGROUND
            } else if span <= 0.0 || !span.is_finite() {
                palette.color(0.0)
            } else {
                palette.color((v - lo) / span)
            };
            pixels.extend_from_slice(&rgb);
        }
    }

    let mut file = fs::File::create(path)?;
    write!(file, "P6\n{n} {n}\n255\n")?;
    file.write_all(&pixels)?;
    Ok(())
}

/// Writes an SVG polarization-texture overlay: a `lattice`×`lattice` grid
/// of cells shaded by intensity, each carrying a glyph for the polarization
/// sample at its center. Undefined pixels get no glyph.
pub fn render_stokes_glyphs(
    map: &StokesMap,
    path: &Path,
    lattice: usize,
) -> Result<(), RenderError> {
    if map.samples().is_empty() {
        return Err(RenderError::EmptyMap);
    }
    if lattice < 2 {
        return Err(RenderError::LatticeTooSmall);
    }
    let n = map.grid().n();
    let size = 800.0;
    let cell = size / lattice as f64;
    let max_s0 = map.samples().iter().map(|s| s.s0).fold(0.0, f64::max);

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size} {size}\">"
    )
    .unwrap();
    writeln!(
        svg,
        "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>"
    )
    .unwrap();

    for gy in 0..lattice {
        for gx in 0..lattice {
            // Sample the pixel at the cell center; image y runs downward,
            // plane rows run upward.
            let col = ((gx as f64 + 0.5) / lattice as f64 * n as f64) as usize;
            let image_row = ((gy as f64 + 0.5) / lattice as f64 * n as f64) as usize;
            let row = n - 1 - image_row.min(n - 1);
            let s = &map.samples()[row * n + col.min(n - 1)];

            let cx = (gx as f64 + 0.5) * cell;
            let cy = (gy as f64 + 0.5) * cell;

            // Intensity shading: darker cells carry more power.
            if max_s0 > 0.0 {
                let shade = (s.s0 / max_s0).sqrt();
                let level = (255.0 * (1.0 - 0.85 * shade)).round() as u8;
                writeln!(
                    svg,
                    "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({level},{level},{level})\"/>",
                    gx as f64 * cell,
                    gy as f64 * cell,
                    cell,
                    cell,
                )
                .unwrap();
            }

            let (Some(zeta), Some(xi)) = (s.zeta, s.xi) else {
                continue;
            };
            match s.class {
                PolarizationClass::Linear => {
                    // Orientation is measured counterclockwise in the
                    // transverse plane; SVG y points down, so negate.
                    let half = 0.4 * cell;
                    let dx = xi.cos() * half;
                    let dy = -xi.sin() * half;
                    writeln!(
                        svg,
                        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#f2c14e\" stroke-width=\"2\"/>",
                        cx - dx,
                        cy - dy,
                        cx + dx,
                        cy + dy,
                    )
                    .unwrap();
                }
                PolarizationClass::Undefined => {}
                _ => {
                    let rx = 0.4 * cell;
                    let ry = (rx * zeta.abs().tan()).max(0.06 * cell);
                    let color = if zeta > 0.0 { "#3566c9" } else { "#d0392e" };
                    writeln!(
                        svg,
                        "<ellipse cx=\"{cx:.2}\" cy=\"{cy:.2}\" rx=\"{rx:.2}\" ry=\"{ry:.2}\" transform=\"rotate({:.3} {cx:.2} {cy:.2})\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
                        -xi.to_degrees(),
                    )
                    .unwrap();
                }
            }
        }
    }
    writeln!(svg, "</svg>").unwrap();
    fs::write(path, svg)?;
    Ok(())
}

/// Renders a polyline chart of (x, y) points into an SVG file, for the
/// characteristic-distance scan. Gap points (`None`) break the line.
pub fn render_curve_svg(
    points: &[(f64, Option<f64>)],
    x_label: &str,
    y_label: &str,
    path: &Path,
) -> Result<(), RenderError> {
    if points.is_empty() {
        return Err(RenderError::EmptyMap);
    }
    let (width, height, margin) = (640.0, 480.0, 60.0);
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().filter_map(|p| p.1).collect();
    let (x_lo, x_hi) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let (y_lo, y_hi) = (
        ys.iter().cloned().fold(f64::INFINITY, f64::min).min(0.0),
        ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let x_span = (x_hi - x_lo).max(f64::MIN_POSITIVE);
    let y_span = (y_hi - y_lo).max(f64::MIN_POSITIVE);
    let to_px = |x: f64, y: f64| {
        (
            margin + (x - x_lo) / x_span * (width - 2.0 * margin),
            height - margin - (y - y_lo) / y_span * (height - 2.0 * margin),
        )
    };

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    writeln!(
        svg,
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>"
    )
    .unwrap();
    writeln!(
        svg,
        "<line x1=\"{margin}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        height - margin,
        width - margin,
        height - margin,
    )
    .unwrap();
    writeln!(
        svg,
        "<line x1=\"{margin}\" y1=\"{margin}\" x2=\"{margin}\" y2=\"{}\" stroke=\"black\"/>",
        height - margin,
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{x_label}</text>",
        width / 2.0,
        height - margin / 3.0,
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">{y_label}</text>",
        margin / 3.0,
        height / 2.0,
        margin / 3.0,
        height / 2.0,
    )
    .unwrap();

    let mut segment: Vec<(f64, f64)> = Vec::new();
    let flush = |seg: &mut Vec<(f64, f64)>, svg: &mut String| {
        if seg.len() >= 2 {
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#3566c9\" stroke-width=\"2\"/>",
                pts.join(" ")
            )
            .unwrap();
        }
        seg.clear();
    };
    for &(x, y) in points {
        match y {
            Some(y) => segment.push(to_px(x, y)),
            None => flush(&mut segment, &mut svg),
        }
    }
    flush(&mut segment, &mut svg);
    writeln!(svg, "</svg>").unwrap();
    fs::write(path, svg)?;
    Ok(())
}
