//! Input vector vortex beam synthesis.
//!
//! The entrance field is a pair of lowest-radial-order Laguerre–Gaussian
//! modes with opposite circular polarizations and opposite topological
//! charges ±l, sharing the radial envelope A(r) = (r/w)^{|l|} e^{−r²/w²}.
//! A mixing angle θ sets the relative strength of the two components and ψ
//! their relative phase, which together select the polarization texture
//! (radial, spiral, azimuthal, or generic).

use crate::bloch::{BlochError, FieldPair};
use num_complex::Complex64 as C64;

/// Parameters of the entrance vector vortex beam.
///
/// The component amplitudes ε_L = ε·cosθ and ε_R = ε·sinθ·e^{iψ} are always
/// derived from (ε, θ, ψ); they are never stored independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexBeamSpec {
    charge: i32,
    waist: f64,
    theta: f64,
    psi: f64,
    epsilon: f64,
}

impl VortexBeamSpec {
    /// `charge` is the topological charge carried by the right-circular
    /// component (the left-circular one carries its negative). Requires
    /// `waist > 0`, `epsilon ≥ 0`, `theta ∈ [0, π/2]`; `psi` is wrapped
    /// into [0, 2π).
    pub fn new(
        charge: i32,
        waist: f64,
        theta: f64,
        psi: f64,
        epsilon: f64,
    ) -> Result<Self, BlochError> {
        if !waist.is_finite() || waist <= 0.0 {
            return Err(BlochError::InvalidParameter(
                "beam waist must be finite and positive",
            ));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(BlochError::InvalidParameter(
                "beam amplitude must be finite and non-negative",
            ));
        }
        if !theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(BlochError::InvalidParameter(
                "mixing angle must lie in [0, pi/2]",
            ));
        }
        if !psi.is_finite() {
            return Err(BlochError::InvalidParameter("relative phase must be finite"));
        }
        Ok(Self {
            charge,
            waist,
            theta,
            psi: psi.rem_euclid(2.0 * std::f64::consts::PI),
            epsilon,
        })
    }

    pub fn charge(&self) -> i32 {
        self.charge
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Amplitude ε·cosθ of the left-circular component.
    pub fn epsilon_l(&self) -> f64 {
        self.epsilon * self.theta.cos()
    }

    /// Amplitude ε·sinθ·e^{iψ} of the right-circular component.
    pub fn epsilon_r(&self) -> C64 {
        C64::from_polar(self.epsilon * self.theta.sin(), self.psi)
    }

    /// Largest radial amplitude: A peaks at r = w·√(|l|/2) with value
    /// (|l|/2)^{|l|/2} e^{−|l|/2}, or 1 at the axis for l = 0.
    pub fn peak_radial_amplitude(&self) -> f64 {
        let m = f64::from(self.charge.abs());
        if m == 0.0 {
            1.0
        } else {
            (m / 2.0).powf(m / 2.0) * (-m / 2.0).exp()
        }
    }

    /// Largest Rabi amplitude over the transverse plane, used for the
    /// weak-field advisory.
    pub fn peak_rabi(&self) -> f64 {
        self.epsilon * self.peak_radial_amplitude() * self.theta.sin().max(self.theta.cos())
    }
}

/// Transverse-plane point in polar form, φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarCoordinate {
    pub r: f64,
    pub phi: f64,
}

impl PolarCoordinate {
    pub fn new(r: f64, phi: f64) -> Result<Self, BlochError> {
        if !r.is_finite() || r < 0.0 {
            return Err(BlochError::InvalidParameter("radius must be non-negative"));
        }
        if !phi.is_finite() || !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(BlochError::InvalidParameter("azimuth must lie in [0, 2pi)"));
        }
        Ok(Self { r, phi })
    }

    /// Converts Cartesian coordinates, mapping the azimuth counterclockwise
    /// from the +x axis into [0, 2π).
    pub fn from_cartesian(x: f64, y: f64) -> Self {
        let r = x.hypot(y);
        let mut phi = y.atan2(x);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        // atan2 can return exactly -0.0 → 2π after the shift; fold it back.
        if phi >= 2.0 * std::f64::consts::PI {
            phi = 0.0;
        }
        Self { r, phi }
    }
}

/// Shared radial envelope A(r) = (r/w)^{|l|} e^{−r²/w²} of both components.
pub fn radial_profile(spec: &VortexBeamSpec, r: f64) -> f64 {
    assert!(r >= 0.0, "radius must be non-negative");
    let u = r / spec.waist();
    u.powi(spec.charge().abs()) * (-u * u).exp()
}

/// Entrance fields at one transverse point:
/// Ω_R = ε·sinθ·e^{iψ}·A(r)·e^{+ilφ}, Ω_L = ε·cosθ·A(r)·e^{−ilφ}.
pub fn input_fields(spec: &VortexBeamSpec, p: &PolarCoordinate) -> FieldPair {
    let amplitude = radial_profile(spec, p.r);
    let lphi = f64::from(spec.charge()) * p.phi;
    FieldPair {
        omega_r: spec.epsilon_r() * amplitude * C64::from_polar(1.0, lphi),
        omega_l: C64::from_polar(spec.epsilon_l() * amplitude, -lphi),
    }
}

/// Named polarization textures selected by the relative phase ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextureLabel {
    Radial,
    Spiral,
    Azimuthal,
    Generic,
}

impl std::fmt::Display for TextureLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TextureLabel::Radial => "radial",
            TextureLabel::Spiral => "spiral",
            TextureLabel::Azimuthal => "azimuthal",
            TextureLabel::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// Labels ψ = 0, π/2, π (to within 1e-9 on the phase circle) as the radial,
/// spiral, and azimuthal textures; anything else is generic.
pub fn texture_label(psi: f64) -> TextureLabel {
    const TOL: f64 = 1e-9;
    let tau = 2.0 * std::f64::consts::PI;
    let circular_dist = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(tau);
        d.min(tau - d)
    };
    let psi = psi.rem_euclid(tau);
    if circular_dist(psi, 0.0) <= TOL {
        TextureLabel::Radial
    } else if circular_dist(psi, std::f64::consts::FRAC_PI_2) <= TOL {
        TextureLabel::Spiral
    } else if circular_dist(psi, std::f64::consts::PI) <= TOL {
        TextureLabel::Azimuthal
    } else {
        TextureLabel::Generic
    }
}
