//! Steady-state coherences and the analytic z-propagator for the two
//! circularly polarized field components in a coherently prepared Λ medium.
//!
//! In the weak-field regime the two Rabi amplitudes obey a pair of linear
//! coupled equations along the propagation axis,
//!
//! ```text
//! dΩ_R/dz = −i β₁ (|c₁|² Ω_R + c₁ c₂* Ω_L)
//! dΩ_L/dz = −i β₂ (c₁* c₂ Ω_R + |c₂|² Ω_L)
//! ```
//!
//! whose solution is a 2×2 transfer matrix built from the coefficients
//! `q₁..q₄` and `X`. The matrix has one stationary eigenvector (the dark
//! combination of the two fields) and one decaying/oscillating eigenvector
//! with rate `−iX`, so absorption acts only until the transparent
//! superposition is reached.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Below this value of |X|·z the q/X ratios are evaluated by series
/// expansion instead of direct division (removable singularity).
pub const SMALL_XZ_THRESHOLD: f64 = 1e-8;

/// Advisory bound on max |Ω|/γ beyond which the weak-field treatment is
/// suspect. Not enforced; surfaced as a warning by the CLI.
pub const WEAK_FIELD_ADVISORY_RATIO: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum BlochError {
    /// Ground-state amplitudes were zero or non-finite.
    #[error("invalid prepared state: {0}")]
    InvalidState(&'static str),
    /// A medium or beam parameter violated its range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    /// Im[X] ≥ 0: the medium does not attenuate, so no characteristic
    /// distance exists.
    #[error("non-absorbing medium: Im[X] = {im_x} is not negative")]
    NonAbsorbing { im_x: f64 },
    /// X vanished and series evaluation was disabled.
    #[error("degenerate propagation coefficients: X = 0")]
    DegenerateCoefficients,
    /// A detuning scan was requested over an empty range.
    #[error("empty detuning range")]
    EmptyDetuningRange,
}

/// Ground-state superposition amplitudes of the prepared medium.
///
/// `c1` is stored real and non-negative; the physical relative phase lives
/// entirely in `c2`, which removes the global-phase gauge freedom. The
/// amplitudes are normalized on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparedState {
    c1: f64,
    c2: C64,
}

impl PreparedState {
    /// Builds a state from the magnitude of `c1` and the relative phase
    /// carried by `c2`. Requires `0 ≤ c1_magnitude ≤ 1`.
    pub fn new(c1_magnitude: f64, relative_phase: f64) -> Result<Self, BlochError> {
        if !c1_magnitude.is_finite() || !relative_phase.is_finite() {
            return Err(BlochError::InvalidState("non-finite amplitude or phase"));
        }
        if !(0.0..=1.0).contains(&c1_magnitude) {
            return Err(BlochError::InvalidState("c1 magnitude outside [0, 1]"));
        }
        let c2_mag = (1.0 - c1_magnitude * c1_magnitude).max(0.0).sqrt();
        Ok(Self {
            c1: c1_magnitude,
            c2: C64::from_polar(c2_mag, relative_phase),
        })
    }

    /// Builds a state from arbitrary complex amplitudes, normalizing them
    /// and re-gauging the global phase so that `c1` is real non-negative.
    /// Rejects zero or non-finite input.
    pub fn from_amplitudes(c1: C64, c2: C64) -> Result<Self, BlochError> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(BlochError::InvalidState("non-finite amplitude"));
        }
        let norm = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(BlochError::InvalidState("zero state"));
        }
        if c1.norm() == 0.0 {
            return Ok(Self {
                c1: 0.0,
                c2: c2 / norm,
            });
        }
        let gauge = C64::from_polar(1.0, -c1.arg());
        Ok(Self {
            c1: c1.norm() / norm,
            c2: c2 * gauge / norm,
        })
    }

    /// Accepts already-gauged components verbatim, for bit-exact
    /// reconstruction from stored metadata. Rejects (rather than
    /// renormalizes) amplitudes whose norm deviates from 1 by more than
    /// 1e-12 or whose `c1` is negative.
    pub fn from_parts(c1: f64, c2: C64) -> Result<Self, BlochError> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(BlochError::InvalidState("non-finite amplitude"));
        }
        if c1 < 0.0 {
            return Err(BlochError::InvalidState("c1 must be non-negative"));
        }
        if (c1 * c1 + c2.norm_sqr() - 1.0).abs() > 1e-12 {
            return Err(BlochError::InvalidState("amplitudes are not normalized"));
        }
        Ok(Self { c1, c2 })
    }

    /// Equal-weight superposition with zero relative phase.
    pub fn balanced() -> Self {
        let m = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c1: m,
            c2: C64::new(m, 0.0),
        }
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> C64 {
        self.c2
    }

    /// Population |c₁|² of the ground state driven by the right-circular leg.
    pub fn population_g1(&self) -> f64 {
        self.c1 * self.c1
    }

    /// Population |c₂|² of the ground state driven by the left-circular leg.
    pub fn population_g2(&self) -> f64 {
        self.c2.norm_sqr()
    }

    /// Ground-state coherence c₁c₂*.
    pub fn coherence(&self) -> C64 {
        self.c2.conj() * self.c1
    }

    /// The field combination decoupled from the medium: Ω_R ∝ c₂*,
    /// Ω_L ∝ −c₁*. Both coherences vanish for it, so it propagates
    /// unattenuated at any distance.
    pub fn dark_input(&self, amplitude: C64) -> FieldPair {
        FieldPair {
            omega_r: amplitude * self.c2.conj(),
            omega_l: -amplitude * self.c1,
        }
    }
}

/// Optical depth, decay rate, and detuning of one leg of the Λ scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionParams {
    alpha: f64,
    gamma: f64,
    delta: f64,
}

impl TransitionParams {
    /// `alpha ≥ 0` (zero models a transparent medium), `gamma > 0`,
    /// `delta` any finite real.
    pub fn new(alpha: f64, gamma: f64, delta: f64) -> Result<Self, BlochError> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(BlochError::InvalidParameter(
                "optical depth must be finite and non-negative",
            ));
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(BlochError::InvalidParameter(
                "decay rate must be finite and positive",
            ));
        }
        if !delta.is_finite() {
            return Err(BlochError::InvalidParameter("detuning must be finite"));
        }
        Ok(Self {
            alpha,
            gamma,
            delta,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Same transition with the detuning replaced.
    pub fn with_delta(&self, delta: f64) -> Result<Self, BlochError> {
        Self::new(self.alpha, self.gamma, delta)
    }
}

/// Medium parameters for both legs plus the physical length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumConfig {
    transition_r: TransitionParams,
    transition_l: TransitionParams,
    length: f64,
}

impl MediumConfig {
    pub fn new(
        transition_r: TransitionParams,
        transition_l: TransitionParams,
        length: f64,
    ) -> Result<Self, BlochError> {
        if !length.is_finite() || length <= 0.0 {
            return Err(BlochError::InvalidParameter(
                "medium length must be finite and positive",
            ));
        }
        Ok(Self {
            transition_r,
            transition_l,
            length,
        })
    }

    /// Both legs share the same optical depth, decay rate, and detuning.
    pub fn symmetric(alpha: f64, gamma: f64, delta: f64, length: f64) -> Result<Self, BlochError> {
        let t = TransitionParams::new(alpha, gamma, delta)?;
        Self::new(t, t, length)
    }

    pub fn transition_r(&self) -> &TransitionParams {
        &self.transition_r
    }

    pub fn transition_l(&self) -> &TransitionParams {
        &self.transition_l
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn beta_r(&self) -> C64 {
        beta(&self.transition_r, self.length)
    }

    pub fn beta_l(&self) -> C64 {
        beta(&self.transition_l, self.length)
    }

    /// Absorption length L/α of the right-circular leg (+∞ for α = 0).
    pub fn absorption_length_r(&self) -> f64 {
        self.length / self.transition_r.alpha
    }

    /// Absorption length L/α of the left-circular leg (+∞ for α = 0).
    pub fn absorption_length_l(&self) -> f64 {
        self.length / self.transition_l.alpha
    }

    /// The absorption length used for normalized distances. Taken from the
    /// right-circular leg; both legs agree for the symmetric media used in
    /// the reference scenarios.
    pub fn absorption_length(&self) -> f64 {
        self.absorption_length_r()
    }
}

/// Complex rate per length for one transition:
/// β = α γ / (2 L (Δ + iγ)).
pub fn beta(t: &TransitionParams, length: f64) -> C64 {
    C64::new(t.alpha * t.gamma, 0.0) / (C64::new(t.delta, t.gamma) * 2.0 * length)
}

/// Complex Rabi amplitudes of the right- and left-circular components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPair {
    pub omega_r: C64,
    pub omega_l: C64,
}

impl FieldPair {
    pub fn new(omega_r: C64, omega_l: C64) -> Self {
        Self { omega_r, omega_l }
    }

    pub fn zero() -> Self {
        Self {
            omega_r: C64::new(0.0, 0.0),
            omega_l: C64::new(0.0, 0.0),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.omega_r.is_finite() && self.omega_l.is_finite()
    }

    /// |Ω_R|² + |Ω_L|².
    pub fn total_intensity(&self) -> f64 {
        self.omega_r.norm_sqr() + self.omega_l.norm_sqr()
    }

    pub fn max_norm(&self) -> f64 {
        self.omega_r.norm().max(self.omega_l.norm())
    }
}

/// The transfer-matrix building blocks at one propagation distance.
#[derive(Debug, Clone, Copy)]
pub struct PropagationCoefficients {
    pub beta1: C64,
    pub beta2: C64,
    pub q1: C64,
    pub q2: C64,
    pub q3: C64,
    pub q4: C64,
    pub x: C64,
    pub z: f64,
}

/// Evaluates β₁, β₂, X = β₁|c₁|² + β₂|c₂|² and the four q coefficients at
/// distance `z`.
pub fn coefficients(state: &PreparedState, medium: &MediumConfig, z: f64) -> PropagationCoefficients {
    assert!(z >= 0.0, "propagation distance must be non-negative");
    let beta1 = medium.beta_r();
    let beta2 = medium.beta_l();
    let p1 = state.population_g1();
    let p2 = state.population_g2();
    let coh = state.coherence();
    let x = beta1 * p1 + beta2 * p2;
    let e = (-C64::i() * x * z).exp();
    let em1 = e - 1.0;
    PropagationCoefficients {
        beta1,
        beta2,
        q1: beta2 * p2 + beta1 * p1 * e,
        q2: beta1 * coh * em1,
        q3: beta1 * p1 + beta2 * p2 * e,
        q4: beta2 * coh.conj() * em1,
        x,
        z,
    }
}

/// How to evaluate the propagator when |X|·z is below
/// [`SMALL_XZ_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallXPolicy {
    /// Use the series expansion of (e^{−iXz} − 1)/X (default).
    Series,
    /// Report [`BlochError::DegenerateCoefficients`] when X = 0.
    Fail,
}

/// 2×2 complex transfer matrix mapping entrance fields to fields at `z`,
/// ordered `[[rr, rl], [lr, ll]]`.
pub type TransferMatrix = [[C64; 2]; 2];

/// Builds the transfer matrix q/X at `z`, switching to the series form of
/// the removable X → 0 singularity when requested by `policy`.
pub fn transfer_matrix(
    state: &PreparedState,
    medium: &MediumConfig,
    z: f64,
    policy: SmallXPolicy,
) -> Result<TransferMatrix, BlochError> {
    assert!(z >= 0.0, "propagation distance must be non-negative");
    let beta1 = medium.beta_r();
    let beta2 = medium.beta_l();
    let p1 = state.population_g1();
    let p2 = state.population_g2();
    let coh = state.coherence();
    let x = beta1 * p1 + beta2 * p2;

    let small = x.norm() * z < SMALL_XZ_THRESHOLD;
    if small {
        match policy {
            SmallXPolicy::Series => {
                // (e^{−iXz} − 1)/X = −iz (1 + y/2 + y²/6) with y = −iXz.
                let y = -C64::i() * x * z;
                let g = C64::new(1.0, 0.0) + y / 2.0 + y * y / 6.0;
                let f = -C64::i() * z * g;
                return Ok([
                    [C64::new(1.0, 0.0) + beta1 * p1 * f, beta1 * coh * f],
                    [
                        beta2 * coh.conj() * f,
                        C64::new(1.0, 0.0) + beta2 * p2 * f,
                    ],
                ]);
            }
            SmallXPolicy::Fail => {
                if x.norm() == 0.0 {
                    return Err(BlochError::DegenerateCoefficients);
                }
            }
        }
    }

    let c = coefficients(state, medium, z);
    Ok([[c.q1 / c.x, c.q2 / c.x], [c.q4 / c.x, c.q3 / c.x]])
}

/// Propagates the entrance field pair to distance `z` using the analytic
/// solution. The removable X → 0 case is handled by series expansion.
pub fn propagate(state: &PreparedState, medium: &MediumConfig, input: &FieldPair, z: f64) -> FieldPair {
    let t = transfer_matrix(state, medium, z, SmallXPolicy::Series)
        .expect("series policy cannot fail");
    apply_transfer(&t, input)
}

/// Like [`propagate`] but with an explicit small-X policy.
pub fn try_propagate(
    state: &PreparedState,
    medium: &MediumConfig,
    input: &FieldPair,
    z: f64,
    policy: SmallXPolicy,
) -> Result<FieldPair, BlochError> {
    Ok(apply_transfer(&transfer_matrix(state, medium, z, policy)?, input))
}

pub fn apply_transfer(t: &TransferMatrix, input: &FieldPair) -> FieldPair {
    FieldPair {
        omega_r: t[0][0] * input.omega_r + t[0][1] * input.omega_l,
        omega_l: t[1][0] * input.omega_r + t[1][1] * input.omega_l,
    }
}

/// Stationary fields reached once the damped component has died out.
///
/// Valid in the symmetric-absorption regime (β₁ = β₂ with Im[X] < 0), where
/// the transfer matrix converges to the projector onto the dark combination:
///
/// ```text
/// Ω_R(∞) =  |c₂|² Ω_R0 − c₁c₂* Ω_L0
/// Ω_L(∞) = −c₁*c₂ Ω_R0 + |c₁|² Ω_L0
/// ```
pub fn asymptotic_fields(state: &PreparedState, input: &FieldPair) -> FieldPair {
    let p1 = state.population_g1();
    let p2 = state.population_g2();
    let coh = state.coherence();
    FieldPair {
        omega_r: input.omega_r * p2 - coh * input.omega_l,
        omega_l: -coh.conj() * input.omega_r + input.omega_l * p1,
    }
}

/// Distance z_c = −1/(2 Im[X]) over which absorption dominates before the
/// transparent superposition is established. Fails when the medium does not
/// attenuate (Im[X] ≥ 0).
pub fn characteristic_distance(
    state: &PreparedState,
    medium: &MediumConfig,
) -> Result<f64, BlochError> {
    let x = medium.beta_r() * state.population_g1() + medium.beta_l() * state.population_g2();
    if x.im >= 0.0 {
        return Err(BlochError::NonAbsorbing { im_x: x.im });
    }
    Ok(-1.0 / (2.0 * x.im))
}

/// One point of a characteristic-distance scan over detuning, with both
/// axes normalized as in the reference plots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZcPoint {
    pub delta_over_gamma: f64,
    /// `None` marks a non-absorbing gap in the curve.
    pub zc_over_labs: Option<f64>,
}

/// Scans z_c over detunings, setting both legs' detuning equal at each
/// point. The detuning axis is normalized to the right-leg γ and z_c to the
/// right-leg absorption length.
pub fn zc_scan(
    state: &PreparedState,
    medium_template: &MediumConfig,
    deltas: &[f64],
) -> Result<Vec<ZcPoint>, BlochError> {
    if deltas.is_empty() {
        return Err(BlochError::EmptyDetuningRange);
    }
    let gamma = medium_template.transition_r().gamma();
    let l_abs = medium_template.absorption_length_r();
    deltas
        .iter()
        .map(|&delta| {
            let medium = MediumConfig::new(
                medium_template.transition_r().with_delta(delta)?,
                medium_template.transition_l().with_delta(delta)?,
                medium_template.length(),
            )?;
            let zc = characteristic_distance(state, &medium).ok();
            Ok(ZcPoint {
                delta_over_gamma: delta / gamma,
                zc_over_labs: zc.map(|z| z / l_abs),
            })
        })
        .collect()
}

/// First-order steady-state coherences (ρ_{g₁e}, ρ_{g₂e}) driven by the
/// given fields. Purely algebraic; the weak-field assumption is the
/// caller's responsibility.
pub fn steady_coherences(
    state: &PreparedState,
    medium: &MediumConfig,
    fields: &FieldPair,
) -> (C64, C64) {
    let p1 = state.population_g1();
    let p2 = state.population_g2();
    let coh = state.coherence();
    let tr = medium.transition_r();
    let tl = medium.transition_l();
    let rho_g1e = -(fields.omega_r * p1 + coh * fields.omega_l) / C64::new(tr.delta(), tr.gamma());
    let rho_g2e = -(coh.conj() * fields.omega_r + fields.omega_l * p2) / C64::new(tl.delta(), tl.gamma());
    (rho_g1e, rho_g2e)
}

/// Linear susceptibilities experienced by each component, χ_k = ρ/Ω_k with
/// unit prefactor (values carry 1/γ units). A component whose field
/// magnitude falls below `floor` is reported as `None` rather than dividing
/// toward infinity on nodal lines.
pub fn susceptibilities(
    state: &PreparedState,
    medium: &MediumConfig,
    fields: &FieldPair,
    floor: f64,
) -> (Option<C64>, Option<C64>) {
    let (rho_g1e, rho_g2e) = steady_coherences(state, medium, fields);
    let chi_r = (fields.omega_r.norm() >= floor).then(|| rho_g1e / fields.omega_r);
    let chi_l = (fields.omega_l.norm() >= floor).then(|| rho_g2e / fields.omega_l);
    (chi_r, chi_l)
}

/// Result of the thin-medium diffraction estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParaxialCheck {
    /// Lλ/w².
    pub ratio: f64,
    /// True iff the accumulated diffraction phase stays below π (strict).
    pub pass: bool,
}

/// Checks the advisory condition Lλ/w² < π under which transverse
/// diffraction is negligible over the medium length.
pub fn paraxial_check(wavelength: f64, waist: f64, length: f64) -> Result<ParaxialCheck, BlochError> {
    if !(wavelength.is_finite() && wavelength > 0.0)
        || !(waist.is_finite() && waist > 0.0)
        || !(length.is_finite() && length > 0.0)
    {
        return Err(BlochError::InvalidParameter(
            "paraxial check requires positive wavelength, waist, and length",
        ));
    }
    let ratio = length * wavelength / (waist * waist);
    Ok(ParaxialCheck {
        ratio,
        pass: ratio < std::f64::consts::PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn symmetric_resonant(alpha: f64) -> MediumConfig {
        MediumConfig::symmetric(alpha, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn beta_resonant_is_negative_imaginary() {
        let t = TransitionParams::new(20.0, 1.0, 0.0).unwrap();
        assert_eq!(beta(&t, 1.0), c(0.0, -10.0));
    }

    #[test]
    fn beta_detuned_hand_value() {
        // 20·1 / (2·1·(2 + i)) = 10/(2 + i) = 4 − 2i.
        let t = TransitionParams::new(20.0, 1.0, 2.0).unwrap();
        assert_eq!(beta(&t, 1.0), c(4.0, -2.0));
    }

    #[test]
    fn beta_zero_depth_is_zero() {
        let t = TransitionParams::new(0.0, 1.0, 0.7).unwrap();
        assert_eq!(beta(&t, 1.0), c(0.0, 0.0));
    }

    #[test]
    fn coefficients_entrance_identity() {
        let state = PreparedState::new(0.6, 1.1).unwrap();
        let medium = MediumConfig::symmetric(17.0, 1.0, 0.4, 1.0).unwrap();
        let co = coefficients(&state, &medium, 0.0);
        assert_eq!(co.q1, co.x);
        assert_eq!(co.q3, co.x);
        assert_eq!(co.q2.norm(), 0.0);
        assert_eq!(co.q4.norm(), 0.0);
    }

    #[test]
    fn coefficients_symmetric_resonant_closed_form() {
        // Balanced state on resonance: q₁ = q₃ = −(iα/4L)(1 + e^{−αz/2L}),
        // q₂ = q₄ = −(iα/4L)(−1 + e^{−αz/2L}).
        let alpha = 20.0;
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(alpha);
        for &z in &[0.05, 0.15, 0.4] {
            let co = coefficients(&state, &medium, z);
            let damp = (-alpha * z / 2.0).exp();
            let q13 = c(0.0, -alpha / 4.0) * (1.0 + damp);
            let q24 = c(0.0, -alpha / 4.0) * (-1.0 + damp);
            assert!(close(co.q1, q13, 1e-13), "q1 {} vs {}", co.q1, q13);
            assert!(close(co.q3, q13, 1e-13));
            assert!(close(co.q2, q24, 1e-13));
            assert!(close(co.q4, q24, 1e-13));
        }
    }

    #[test]
    fn coefficients_decoupled_limit() {
        let state = PreparedState::new(1.0, 0.0).unwrap();
        let medium = MediumConfig::symmetric(12.0, 1.0, 0.5, 1.0).unwrap();
        let z = 0.3;
        let co = coefficients(&state, &medium, z);
        let b1 = medium.beta_r();
        assert_eq!(co.q2.norm(), 0.0);
        assert_eq!(co.q4.norm(), 0.0);
        assert!(close(co.x, b1, 1e-15));
        assert!(close(co.q3, b1, 1e-15));
        assert!(close(co.q1, b1 * (-C64::i() * b1 * z).exp(), 1e-13));
    }

    #[test]
    fn propagate_identity_at_entrance_is_exact() {
        let state = PreparedState::new(0.3, 2.0).unwrap();
        let medium = MediumConfig::symmetric(33.0, 1.0, -1.5, 1.0).unwrap();
        let input = FieldPair::new(c(0.3, -0.1), c(-0.7, 0.2));
        let out = propagate(&state, &medium, &input, 0.0);
        assert_eq!(out, input);
    }

    #[test]
    fn propagate_decoupled_exponential() {
        // Fully g₁-prepared resonant medium: Ω_R decays as e^{−αz/2L},
        // Ω_L passes through untouched.
        let state = PreparedState::new(1.0, 0.0).unwrap();
        let medium = symmetric_resonant(20.0);
        let input = FieldPair::new(c(1.0, 0.0), c(1.0, 0.0));
        let out = propagate(&state, &medium, &input, 0.1);
        assert!(close(out.omega_r, c((-1.0f64).exp(), 0.0), 1e-12));
        assert!(close(out.omega_l, c(1.0, 0.0), 1e-12));
    }

    #[test]
    fn propagate_extinction_of_matched_inputs() {
        // Balanced state, identical inputs: both components die out.
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(20.0);
        let amp = c(0.7, 0.3);
        let input = FieldPair::new(amp, amp);
        let z = 50.0 * medium.absorption_length();
        let out = propagate(&state, &medium, &input, z);
        assert!(out.omega_r.norm() <= 1e-10);
        assert!(out.omega_l.norm() <= 1e-10);
    }

    #[test]
    fn propagate_matches_symmetric_resonant_closed_form() {
        // Counter-rotating phase inputs of equal amplitude: the transmitted
        // component is E·cos(lφ) + i·sin(lφ) times the input amplitude,
        // with E = e^{−αz/2L}; the other carries the conjugate pattern.
        let alpha = 20.0;
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(alpha);
        let amp = 0.05;
        for l in [1i32, 2, 3] {
            for &phi in &[0.0, 0.37, PI / 3.0, 2.1, 5.9] {
                for &z_over_labs in &[0.0, 0.5, 1.0, 20.0] {
                    let z = z_over_labs * medium.absorption_length();
                    let damp = (-alpha * z / 2.0).exp();
                    let lphi = f64::from(l) * phi;
                    let input = FieldPair::new(
                        C64::from_polar(amp, lphi),
                        C64::from_polar(amp, -lphi),
                    );
                    let out = propagate(&state, &medium, &input, z);
                    let expect_r = amp * c(damp * lphi.cos(), lphi.sin());
                    let expect_l = amp * c(damp * lphi.cos(), -lphi.sin());
                    assert!(
                        close(out.omega_r, expect_r, 1e-12 * amp),
                        "l={l} phi={phi} z={z}: {} vs {}",
                        out.omega_r,
                        expect_r
                    );
                    assert!(close(out.omega_l, expect_l, 1e-12 * amp));
                }
            }
        }
    }

    #[test]
    fn secondary_beam_is_generated_from_a_single_input() {
        // With ground-state coherence present, a beam entering on one leg
        // feeds the other through the cross coupling.
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(20.0);
        let input = FieldPair::new(c(0.0, 0.0), c(1.0, 0.0));
        let out = propagate(&state, &medium, &input, 0.1);
        assert!(out.omega_r.norm() > 0.1, "no secondary beam: {out:?}");

        // Without coherence (single populated ground state) nothing leaks.
        let pure = PreparedState::new(1.0, 0.0).unwrap();
        let out = propagate(&pure, &medium, &input, 0.1);
        assert_eq!(out.omega_r.norm(), 0.0);
    }

    #[test]
    fn balanced_asymptotic_fields_are_antisymmetric() {
        // With equal populations the stationary fields satisfy
        // Ω_L(∞) = −Ω_R(∞), so S₃ vanishes pointwise.
        let state = PreparedState::balanced();
        for input in [
            FieldPair::new(c(0.9, 0.1), c(0.2, -0.7)),
            FieldPair::new(c(-0.4, 0.0), c(0.0, 0.6)),
        ] {
            let out = asymptotic_fields(&state, &input);
            assert!((out.omega_l + out.omega_r).norm() <= 1e-15);
            assert!((out.omega_r.norm_sqr() - out.omega_l.norm_sqr()).abs() <= 1e-15);
        }
    }

    #[test]
    fn try_propagate_degenerate_without_series() {
        let state = PreparedState::balanced();
        let medium = MediumConfig::symmetric(0.0, 1.0, 0.0, 1.0).unwrap();
        let input = FieldPair::new(c(1.0, 0.0), c(0.0, 0.0));
        let err = try_propagate(&state, &medium, &input, 1.0, SmallXPolicy::Fail).unwrap_err();
        assert_eq!(err, BlochError::DegenerateCoefficients);
        // The series policy treats the transparent medium exactly.
        let out = propagate(&state, &medium, &input, 1.0);
        assert_eq!(out, input);
    }

    #[test]
    fn asymptotic_fields_examples() {
        let g1_only = PreparedState::new(1.0, 0.0).unwrap();
        let input = FieldPair::new(c(0.4, 0.1), c(-0.3, 0.9));
        let out = asymptotic_fields(&g1_only, &input);
        assert_eq!(out.omega_r.norm(), 0.0);
        assert!(close(out.omega_l, input.omega_l, 1e-15));

        let balanced = PreparedState::balanced();
        let matched = FieldPair::new(c(0.8, 0.0), c(0.8, 0.0));
        let out = asymptotic_fields(&balanced, &matched);
        assert!(out.omega_r.norm() <= 1e-16);
        assert!(out.omega_l.norm() <= 1e-16);

        let opposed = FieldPair::new(c(0.8, 0.0), c(-0.8, 0.0));
        let out = asymptotic_fields(&balanced, &opposed);
        assert!(close(out.omega_r, c(0.8, 0.0), 1e-15));
        assert!(close(out.omega_l, c(-0.8, 0.0), 1e-15));
    }

    #[test]
    fn propagate_converges_to_asymptotic_fields() {
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(20.0);
        let input = FieldPair::new(c(0.8, 0.0), c(-0.8, 0.0));
        let z = 50.0 * medium.absorption_length();
        let far = propagate(&state, &medium, &input, z);
        let limit = asymptotic_fields(&state, &input);
        let scale = input.max_norm();
        assert!((far.omega_r - limit.omega_r).norm() <= 1e-10 * scale);
        assert!((far.omega_l - limit.omega_l).norm() <= 1e-10 * scale);
    }

    #[test]
    fn characteristic_distance_values() {
        let state = PreparedState::balanced();
        let resonant = symmetric_resonant(20.0);
        let l_abs = resonant.absorption_length();
        let zc = characteristic_distance(&state, &resonant).unwrap();
        assert!((zc / l_abs - 1.0).abs() <= 1e-14);

        let detuned = MediumConfig::symmetric(20.0, 1.0, 2.0, 1.0).unwrap();
        let zc = characteristic_distance(&state, &detuned).unwrap();
        assert!((zc / l_abs - 5.0).abs() <= 1e-12);

        let detuned = MediumConfig::symmetric(20.0, 1.0, 1.0, 1.0).unwrap();
        let zc = characteristic_distance(&state, &detuned).unwrap();
        assert!((zc / l_abs - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn characteristic_distance_rejects_transparent_medium() {
        let state = PreparedState::balanced();
        let medium = MediumConfig::symmetric(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            characteristic_distance(&state, &medium),
            Err(BlochError::NonAbsorbing { .. })
        ));
    }

    #[test]
    fn zc_scan_points() {
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(20.0);
        let pts = zc_scan(&state, &medium, &[0.0]).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].delta_over_gamma, 0.0);
        assert!((pts[0].zc_over_labs.unwrap() - 1.0).abs() <= 1e-14);

        let pts = zc_scan(&state, &medium, &[-2.0, 2.0]).unwrap();
        let a = pts[0].zc_over_labs.unwrap();
        let b = pts[1].zc_over_labs.unwrap();
        assert_eq!(a, b);
        assert!((a - 5.0).abs() <= 1e-12);

        assert_eq!(
            zc_scan(&state, &medium, &[]).unwrap_err(),
            BlochError::EmptyDetuningRange
        );
    }

    #[test]
    fn steady_coherences_examples() {
        let state = PreparedState::new(1.0, 0.0).unwrap();
        let medium = symmetric_resonant(20.0);

        let (r1, r2) = steady_coherences(&state, &medium, &FieldPair::zero());
        assert_eq!(r1.norm(), 0.0);
        assert_eq!(r2.norm(), 0.0);

        // Fully g₁-prepared on resonance: ρ_{g₁e} = iΩ_R/γ.
        let fields = FieldPair::new(c(0.02, 0.01), c(0.5, 0.0));
        let (r1, _) = steady_coherences(&state, &medium, &fields);
        assert!(close(r1, C64::i() * fields.omega_r, 1e-15));
    }

    #[test]
    fn steady_coherences_symmetric_resonant_pattern() {
        // Under balanced preparation on resonance both coherences collapse
        // to (amp/γ)·cos(lφ)·i·e^{−αz/2L} for counter-rotating inputs.
        let alpha = 20.0;
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(alpha);
        let amp = 0.04;
        let l = 2i32;
        for &phi in &[0.2, 1.0, 2.5, 4.4] {
            for &z in &[0.0, 0.02, 0.1] {
                let lphi = f64::from(l) * phi;
                let input = FieldPair::new(
                    C64::from_polar(amp, lphi),
                    C64::from_polar(amp, -lphi),
                );
                let fields = propagate(&state, &medium, &input, z);
                let (r1, r2) = steady_coherences(&state, &medium, &fields);
                let expect = C64::i() * amp * lphi.cos() * (-alpha * z / 2.0).exp();
                assert!(close(r1, expect, 1e-14), "{r1} vs {expect}");
                assert!(close(r2, expect, 1e-14));
            }
        }
    }

    #[test]
    fn susceptibilities_symmetric_resonant_closed_form() {
        let alpha = 20.0;
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(alpha);
        let amp = 0.04;
        let l = 1i32;
        for &phi in &[0.3, 1.2, 2.0, 3.9, 5.6] {
            for &z in &[0.0, 0.05, 0.2] {
                let lphi = f64::from(l) * phi;
                let input = FieldPair::new(
                    C64::from_polar(amp, lphi),
                    C64::from_polar(amp, -lphi),
                );
                let fields = propagate(&state, &medium, &input, z);
                let (chi_r, chi_l) = susceptibilities(&state, &medium, &fields, 1e-12 * amp);
                let damp = (-alpha * z / 2.0).exp();
                let denom_r = c(damp * lphi.cos(), lphi.sin());
                let denom_l = c(damp * lphi.cos(), -lphi.sin());
                let expect_r = C64::i() * lphi.cos() * damp / denom_r;
                let expect_l = C64::i() * lphi.cos() * damp / denom_l;
                assert!(close(chi_r.unwrap(), expect_r, 1e-12));
                assert!(close(chi_l.unwrap(), expect_l, 1e-12));
            }
        }
    }

    #[test]
    fn susceptibility_limits() {
        let state = PreparedState::balanced();
        let medium = symmetric_resonant(20.0);
        let amp = 0.04;

        // On the cos(lφ) = ±1 lines the ratio stays pinned at i/γ at any z.
        for &z in &[0.0, 0.1, 1.0] {
            let input = FieldPair::new(c(amp, 0.0), c(amp, 0.0));
            let fields = propagate(&state, &medium, &input, z);
            let (chi_r, _) = susceptibilities(&state, &medium, &fields, 1e-12 * amp);
            assert!(close(chi_r.unwrap(), C64::i(), 1e-12));
        }

        // Deep in the medium, away from those lines, absorption vanishes.
        let lphi = std::f64::consts::FRAC_PI_4;
        let input = FieldPair::new(C64::from_polar(amp, lphi), C64::from_polar(amp, -lphi));
        let z = 30.0 * medium.absorption_length();
        let fields = propagate(&state, &medium, &input, z);
        let (chi_r, _) = susceptibilities(&state, &medium, &fields, 1e-12 * amp);
        assert!(chi_r.unwrap().norm() <= 1e-5);

        // Below the floor the ratio is reported undefined.
        let (chi_r, chi_l) = susceptibilities(&state, &medium, &FieldPair::zero(), 1e-12);
        assert!(chi_r.is_none());
        assert!(chi_l.is_none());
    }

    #[test]
    fn paraxial_check_examples() {
        let r = paraxial_check(795e-9, 1e-3, 1e-2).unwrap();
        assert!((r.ratio - 7.95e-3).abs() <= 1e-17);
        assert!(r.pass);

        // Ratio exactly π fails the strict bound.
        let r = paraxial_check(1.0, 1.0, PI).unwrap();
        assert_eq!(r.ratio, PI);
        assert!(!r.pass);

        let r = paraxial_check(795e-9, 1e3, 1e-2).unwrap();
        assert!(r.pass);

        assert!(paraxial_check(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn prepared_state_construction() {
        let s = PreparedState::new(FRAC_1_SQRT_2, 0.7).unwrap();
        assert!((s.population_g1() + s.population_g2() - 1.0).abs() <= 1e-12);
        assert!(PreparedState::new(1.2, 0.0).is_err());
        assert!(PreparedState::new(f64::NAN, 0.0).is_err());
        assert!(PreparedState::from_amplitudes(c(0.0, 0.0), c(0.0, 0.0)).is_err());

        // Global phase is gauged away; relative phase is preserved.
        let g = C64::from_polar(1.0, 0.9);
        let a = PreparedState::from_amplitudes(c(0.6, 0.0) * g, c(0.0, 0.8) * g).unwrap();
        assert!((a.c1() - 0.6).abs() <= 1e-15);
        assert!(close(a.c2(), c(0.0, 0.8), 1e-15));
    }

    #[test]
    fn contractivity_on_resonance() {
        let state = PreparedState::new(0.8, 1.3).unwrap();
        let medium = symmetric_resonant(20.0);
        let input = FieldPair::new(c(0.5, 0.2), c(-0.3, 0.4));
        let z_max = 30.0 * medium.absorption_length();
        let mut last = input.total_intensity();
        for k in 1..=1000 {
            let z = z_max * f64::from(k) / 1000.0;
            let s = propagate(&state, &medium, &input, z).total_intensity();
            assert!(
                s <= last * (1.0 + 1e-12),
                "intensity grew at z={z}: {s} > {last}"
            );
            last = s;
        }
    }

    proptest! {
        #[test]
        fn prop_entrance_identity(
            m in 0.0f64..1.0,
            phase in 0.0f64..(2.0 * PI),
            alpha in 1.0f64..50.0,
            delta in -3.0f64..3.0,
            re_r in -1.0f64..1.0, im_r in -1.0f64..1.0,
            re_l in -1.0f64..1.0, im_l in -1.0f64..1.0,
        ) {
            let state = PreparedState::new(m, phase).unwrap();
            let medium = MediumConfig::symmetric(alpha, 1.0, delta, 1.0).unwrap();
            let input = FieldPair::new(c(re_r, im_r), c(re_l, im_l));
            prop_assert_eq!(propagate(&state, &medium, &input, 0.0), input);
        }

        #[test]
        fn prop_dark_input_is_invariant(
            m in 0.0f64..1.0,
            phase in 0.0f64..(2.0 * PI),
            alpha in 1.0f64..50.0,
            delta1 in -3.0f64..3.0,
            delta2 in -3.0f64..3.0,
            z_over_labs in 0.0f64..30.0,
        ) {
            let state = PreparedState::new(m, phase).unwrap();
            let medium = MediumConfig::new(
                TransitionParams::new(alpha, 1.0, delta1).unwrap(),
                TransitionParams::new(alpha, 1.0, delta2).unwrap(),
                1.0,
            ).unwrap();
            let input = state.dark_input(c(0.6, -0.2));
            let scale = input.max_norm().max(1e-30);

            let (r1, r2) = steady_coherences(&state, &medium, &input);
            prop_assert!(r1.norm() <= 1e-14 * scale);
            prop_assert!(r2.norm() <= 1e-14 * scale);

            let z = z_over_labs * medium.absorption_length();
            let out = propagate(&state, &medium, &input, z);
            prop_assert!((out.omega_r - input.omega_r).norm() <= 1e-12 * scale);
            prop_assert!((out.omega_l - input.omega_l).norm() <= 1e-12 * scale);
        }

        #[test]
        fn prop_zc_detuning_parity(
            m in 0.0f64..1.0,
            alpha in 1.0f64..50.0,
            delta in 0.0f64..3.0,
        ) {
            let state = PreparedState::new(m, 0.0).unwrap();
            let plus = MediumConfig::symmetric(alpha, 1.0, delta, 1.0).unwrap();
            let minus = MediumConfig::symmetric(alpha, 1.0, -delta, 1.0).unwrap();
            prop_assert_eq!(
                characteristic_distance(&state, &plus).unwrap(),
                characteristic_distance(&state, &minus).unwrap()
            );
        }

        #[test]
        fn prop_coefficient_identities(
            m in 0.0f64..1.0,
            phase in 0.0f64..(2.0 * PI),
            alpha in 1.0f64..50.0,
            delta in -3.0f64..3.0,
            z in 0.0f64..2.0,
        ) {
            let state = PreparedState::new(m, phase).unwrap();
            let medium = MediumConfig::symmetric(alpha, 1.0, delta, 1.0).unwrap();

            let co0 = coefficients(&state, &medium, 0.0);
            prop_assert_eq!(co0.q1, co0.x);
            prop_assert_eq!(co0.q3, co0.x);
            prop_assert_eq!(co0.q2.norm(), 0.0);
            prop_assert_eq!(co0.q4.norm(), 0.0);

            // With β₁ = β₂ the diagonal coefficients sum to X(1 + e^{−iXz}).
            let co = coefficients(&state, &medium, z);
            let e = (-C64::i() * co.x * z).exp();
            let expect = co.x * (C64::new(1.0, 0.0) + e);
            prop_assert!((co.q1 + co.q3 - expect).norm() <= 1e-13 * expect.norm().max(1.0));
        }
    }
}
