//! Stokes polarimetry and azimuthal structure analysis.
//!
//! Stokes parameters are built in the circular basis, so S₃ compares the
//! right- and left-circular powers directly:
//!
//! ```text
//! S₀ = |E_R|² + |E_L|²     S₁ = 2 Re(E_R* E_L)
//! S₂ = 2 Im(E_R* E_L)      S₃ = |E_R|² − |E_L|²
//! ```
//!
//! The field is fully polarized by construction, so S₀² = S₁² + S₂² + S₃²
//! holds pointwise. Ellipticity ζ = ½·asin(S₃/S₀) and orientation
//! ξ = ½·atan2(S₂, S₁); ξ is treated as π-periodic (headless line field).
//!
//! Ring analyses count transparency windows (connected below-threshold
//! intervals of an absorption profile) and intensity petals (above-threshold
//! intervals), with circular wraparound and a Schmitt-trigger hysteresis
//! band around the threshold to suppress sampling noise.

use crate::bloch::FieldPair;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use thiserror::Error;

/// Default classification tolerance on ζ, in radians.
pub const DEFAULT_CLASS_TOLERANCE: f64 = 0.05;

/// Default window threshold as a fraction of the ring maximum.
pub const DEFAULT_WINDOW_THRESHOLD: f64 = 0.5;

/// Default hysteresis band (fraction of ring maximum) around the threshold.
pub const DEFAULT_WINDOW_HYSTERESIS: f64 = 0.05;

/// Minimum number of azimuthal samples accepted by ring analyses.
pub const MIN_RING_SAMPLES: usize = 360;

#[derive(Debug, Error, PartialEq)]
pub enum PolarimetryError {
    #[error("ring profile needs at least {MIN_RING_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("threshold fraction must lie strictly between 0 and 1")]
    BadThreshold,
    #[error("ring profile contains non-finite samples")]
    NonFiniteProfile,
    #[error("window center lists have different lengths ({0} vs {1})")]
    CountMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationClass {
    Linear,
    LeftCircular,
    RightCircular,
    EllipticalLeft,
    EllipticalRight,
    Undefined,
}

impl std::fmt::Display for PolarizationClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PolarizationClass::Linear => "linear",
            PolarizationClass::LeftCircular => "left_circular",
            PolarizationClass::RightCircular => "right_circular",
            PolarizationClass::EllipticalLeft => "elliptical_left",
            PolarizationClass::EllipticalRight => "elliptical_right",
            PolarizationClass::Undefined => "undefined",
        };
        f.write_str(s)
    }
}

/// Stokes parameters plus the derived ellipse angles at one point.
///
/// `zeta`/`xi` are `None` (and `class` is `Undefined`) where S₀ does not
/// exceed the intensity floor; polarization has no meaning at field nulls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesSample {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub zeta: Option<f64>,
    pub xi: Option<f64>,
    pub class: PolarizationClass,
}

/// Wraps an orientation angle into [−π/2, π/2).
pub fn wrap_orientation(xi: f64) -> f64 {
    let w = (xi + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    if w >= FRAC_PI_2 {
        -FRAC_PI_2
    } else {
        w
    }
}

/// Computes the Stokes sample of a field pair; the polarization angles are
/// defined only when S₀ > `floor`.
pub fn stokes_with_floor(fields: &FieldPair, floor: f64) -> StokesSample {
    let pr = fields.omega_r.norm_sqr();
    let pl = fields.omega_l.norm_sqr();
    let cross = fields.omega_r.conj() * fields.omega_l;
    let s0 = pr + pl;
    let s1 = 2.0 * cross.re;
    let s2 = 2.0 * cross.im;
    let s3 = pr - pl;
    if s0 > floor && s0.is_finite() {
        let zeta = 0.5 * (s3 / s0).clamp(-1.0, 1.0).asin();
        let xi = wrap_orientation(0.5 * s2.atan2(s1));
        StokesSample {
            s0,
            s1,
            s2,
            s3,
            zeta: Some(zeta),
            xi: Some(xi),
            class: classify(zeta, DEFAULT_CLASS_TOLERANCE),
        }
    } else {
        StokesSample {
            s0,
            s1,
            s2,
            s3,
            zeta: None,
            xi: None,
            class: PolarizationClass::Undefined,
        }
    }
}

/// [`stokes_with_floor`] with a zero floor: only exact nulls are undefined.
pub fn stokes(fields: &FieldPair) -> StokesSample {
    stokes_with_floor(fields, 0.0)
}

/// Classifies an ellipticity angle. ζ = +π/4 is right-circular (S₃ = +S₀
/// means the right-circular component dominates).
pub fn classify(zeta: f64, tol: f64) -> PolarizationClass {
    assert!(tol > 0.0, "classification tolerance must be positive");
    if zeta.abs() <= tol {
        PolarizationClass::Linear
    } else if (zeta - FRAC_PI_4).abs() <= tol {
        PolarizationClass::RightCircular
    } else if (zeta + FRAC_PI_4).abs() <= tol {
        PolarizationClass::LeftCircular
    } else if zeta > 0.0 {
        PolarizationClass::EllipticalRight
    } else {
        PolarizationClass::EllipticalLeft
    }
}

/// Orientation rotation ξ(z) − ξ(0), wrapped into [−π/2, π/2); undefined
/// inputs propagate.
pub fn rotation(xi_z: Option<f64>, xi_0: Option<f64>) -> Option<f64> {
    Some(wrap_orientation(xi_z? - xi_0?))
}

/// Which side of the threshold constitutes a feature interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingFeature {
    /// Transparency windows: intervals below the threshold.
    Below,
    /// Intensity petals: intervals above the threshold.
    Above,
}

/// Result of counting feature intervals around a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct AzimuthalWindows {
    pub count: usize,
    /// Set when the profile never leaves one side of the hysteresis band,
    /// so no structure exists; `count` is 0 in that case.
    pub uniform: bool,
    /// Circular-mean azimuth of each interval, in ring order, assuming
    /// sample k sits at φ = 2πk/len.
    pub centers: Vec<f64>,
}

/// Counts connected feature intervals on a circular profile.
///
/// The profile is compared against `threshold_fraction` of its maximum with
/// a hysteresis band of [`DEFAULT_WINDOW_HYSTERESIS`] of the maximum; a
/// sample inside the band keeps the previous state, so single-sample jitter
/// at the threshold cannot split an interval.
pub fn count_azimuthal_windows(
    profile: &[f64],
    threshold_fraction: f64,
    feature: RingFeature,
) -> Result<AzimuthalWindows, PolarimetryError> {
    count_azimuthal_windows_with(
        profile,
        threshold_fraction,
        DEFAULT_WINDOW_HYSTERESIS,
        feature,
    )
}

pub fn count_azimuthal_windows_with(
    profile: &[f64],
    threshold_fraction: f64,
    hysteresis: f64,
    feature: RingFeature,
) -> Result<AzimuthalWindows, PolarimetryError> {
    let n = profile.len();
    if n < MIN_RING_SAMPLES {
        return Err(PolarimetryError::TooFewSamples(n));
    }
    if !(0.0 < threshold_fraction && threshold_fraction < 1.0) {
        return Err(PolarimetryError::BadThreshold);
    }
    if profile.iter().any(|v| !v.is_finite()) {
        return Err(PolarimetryError::NonFiniteProfile);
    }
    let max = profile.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 {
        // Nothing above zero: no scale to count against.
        return Ok(AzimuthalWindows {
            count: 0,
            uniform: true,
            centers: Vec::new(),
        });
    }
    let lo = (threshold_fraction - hysteresis / 2.0) * max;
    let hi = (threshold_fraction + hysteresis / 2.0) * max;

    // In-feature means below `lo` (Below) or above `hi` (Above); the
    // opposite bound leaves the feature. Samples inside the band are
    // ambiguous and inherit the previous state.
    let enters = |v: f64| match feature {
        RingFeature::Below => v <= lo,
        RingFeature::Above => v >= hi,
    };
    let leaves = |v: f64| match feature {
        RingFeature::Below => v >= hi,
        RingFeature::Above => v <= lo,
    };

    // Walk the circle starting from a sample that is firmly outside the
    // feature, so an interval wrapping the seam is still one interval. If
    // no such sample exists the profile is featureless on this side.
    let Some(start) = (0..n).find(|&i| leaves(profile[i])) else {
        return Ok(AzimuthalWindows {
            count: 0,
            uniform: true,
            centers: Vec::new(),
        });
    };
    let mut in_feature = false;
    let mut intervals: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for step in 1..=n {
        let i = (start + step) % n;
        let v = profile[i];
        if in_feature && leaves(v) {
            in_feature = false;
            intervals.push(std::mem::take(&mut current));
        } else if !in_feature && enters(v) {
            in_feature = true;
        }
        if in_feature {
            current.push(i);
        }
    }
    debug_assert!(!in_feature, "walk must end outside: start sample leaves");
    if intervals.is_empty() {
        return Ok(AzimuthalWindows {
            count: 0,
            uniform: true,
            centers: Vec::new(),
        });
    }

    // Hysteresis skews interval edges toward the exit bound, so centers are
    // recomputed on the symmetric plain-threshold run around each
    // interval's extremum.
    let threshold = threshold_fraction * max;
    let inside = |v: f64| match feature {
        RingFeature::Below => v < threshold,
        RingFeature::Above => v > threshold,
    };
    let tau = 2.0 * PI;
    let mut centers: Vec<f64> = intervals
        .iter()
        .map(|members| {
            let anchor = *members
                .iter()
                .min_by(|&&a, &&b| {
                    let (va, vb) = (profile[a], profile[b]);
                    match feature {
                        RingFeature::Below => va.partial_cmp(&vb).unwrap(),
                        RingFeature::Above => vb.partial_cmp(&va).unwrap(),
                    }
                })
                .expect("intervals are non-empty");
            let mut run = vec![anchor];
            let mut left = anchor;
            for _ in 1..n {
                let i = (left + n - 1) % n;
                if !inside(profile[i]) || i == anchor {
                    break;
                }
                run.push(i);
                left = i;
            }
            let mut right = anchor;
            for _ in 1..n {
                let i = (right + 1) % n;
                if !inside(profile[i]) || i == left {
                    break;
                }
                run.push(i);
                right = i;
            }
            let (s, c) = run.iter().fold((0.0, 0.0), |(s, c), &i| {
                let phi = tau * i as f64 / n as f64;
                (s + phi.sin(), c + phi.cos())
            });
            s.atan2(c).rem_euclid(tau)
        })
        .collect();
    centers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(AzimuthalWindows {
        count: intervals.len(),
        uniform: false,
        centers,
    })
}

/// Mean circular rotation between two matched sets of interval centers.
///
/// Both lists are sorted and matched under the cyclic shift that makes the
/// pairwise differences most concentrated; the returned angle is their
/// circular mean. The direction is meaningful modulo the interval spacing.
pub fn petal_rotation_angle(
    centers_at_psi: &[f64],
    centers_at_zero: &[f64],
) -> Result<f64, PolarimetryError> {
    let m = centers_at_psi.len();
    if m != centers_at_zero.len() {
        return Err(PolarimetryError::CountMismatch(m, centers_at_zero.len()));
    }
    if m == 0 {
        return Ok(0.0);
    }
    let mut a = centers_at_psi.to_vec();
    let mut b = centers_at_zero.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut best: Option<(f64, f64)> = None; // (resultant, mean)
    for shift in 0..m {
        let (mut s, mut c) = (0.0, 0.0);
        for k in 0..m {
            let d = a[(k + shift) % m] - b[k];
            s += d.sin();
            c += d.cos();
        }
        let resultant = s.hypot(c) / m as f64;
        let mean = s.atan2(c);
        let better = match best {
            None => true,
            Some((r, mu)) => {
                resultant > r + 1e-12
                    || ((resultant - r).abs() <= 1e-12 && mean.abs() < mu.abs())
            }
        };
        if better {
            best = Some((resultant, mean));
        }
    }
    Ok(best.expect("m > 0").1)
}

/// Convenience: the cross-polarization product E_R* E_L.
pub fn circular_cross(fields: &FieldPair) -> C64 {
    fields.omega_r.conj() * fields.omega_l
}
