//! Independent fixed-step RK4 integration of the coupled propagation
//! equations, used to cross-check the analytic propagator.
//!
//! The integrator evaluates the right-hand side
//!
//! ```text
//! dΩ_R/dz = −i β₁ (|c₁|² Ω_R + c₁c₂* Ω_L)
//! dΩ_L/dz = −i β₂ (c₁*c₂ Ω_R + |c₂|² Ω_L)
//! ```
//!
//! directly and deliberately shares none of the q/X coefficient code with
//! the analytic path; the point of this module is independence. The
//! equations are linear with constant coefficients, so fixed-step classical
//! RK4 has predictable fourth-order error and nothing adaptive to audit.

use crate::bloch::{FieldPair, MediumConfig, PreparedState};
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Hard cap on total RK4 steps; beyond this the request is refused rather
/// than silently running for minutes.
pub const MAX_TOTAL_STEPS: usize = 20_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("integrator needs at least 100 steps per absorption length, got {0}")]
    TooFewSteps(usize),
    #[error("step count {0} exceeds the {MAX_TOTAL_STEPS} cap for this distance")]
    StepOverflow(usize),
}

/// Fixed-step classical Runge–Kutta configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegratorConfig {
    steps_per_absorption_length: usize,
}

impl IntegratorConfig {
    pub fn new(steps_per_absorption_length: usize) -> Result<Self, OracleError> {
        if steps_per_absorption_length < 100 {
            return Err(OracleError::TooFewSteps(steps_per_absorption_length));
        }
        Ok(Self {
            steps_per_absorption_length,
        })
    }

    pub fn steps_per_absorption_length(&self) -> usize {
        self.steps_per_absorption_length
    }

    /// Doubled resolution, for Richardson comparisons.
    fn refined(&self, factor: usize) -> Self {
        Self {
            steps_per_absorption_length: self.steps_per_absorption_length * factor,
        }
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            steps_per_absorption_length: 1000,
        }
    }
}

fn total_steps(medium: &MediumConfig, z: f64, cfg: &IntegratorConfig) -> Result<usize, OracleError> {
    // Resolve the stiffest decay scale present: the shorter of the two
    // absorption lengths.
    let alpha_max = medium
        .transition_r()
        .alpha()
        .max(medium.transition_l().alpha());
    let steps = if alpha_max > 0.0 {
        let l_abs_min = medium.length() / alpha_max;
        (z / l_abs_min * cfg.steps_per_absorption_length as f64).ceil() as usize
    } else {
        // Transparent medium: the field is constant, one step suffices.
        1
    };
    let steps = steps.max(1);
    if steps > MAX_TOTAL_STEPS {
        return Err(OracleError::StepOverflow(steps));
    }
    Ok(steps)
}

/// Numerically integrates the coupled equations from 0 to `z`.
pub fn integrate(
    state: &PreparedState,
    medium: &MediumConfig,
    input: &FieldPair,
    z: f64,
    cfg: &IntegratorConfig,
) -> Result<FieldPair, OracleError> {
    assert!(z >= 0.0, "propagation distance must be non-negative");
    if z == 0.0 {
        return Ok(*input);
    }
    let steps = total_steps(medium, z, cfg)?;
    let h = z / steps as f64;

    let m_rr = -C64::i() * medium.beta_r() * state.population_g1();
    let m_rl = -C64::i() * medium.beta_r() * state.coherence();
    let m_lr = -C64::i() * medium.beta_l() * state.coherence().conj();
    let m_ll = -C64::i() * medium.beta_l() * state.population_g2();
    let rhs = |r: C64, l: C64| (m_rr * r + m_rl * l, m_lr * r + m_ll * l);

    let mut r = input.omega_r;
    let mut l = input.omega_l;
    for _ in 0..steps {
        let (k1r, k1l) = rhs(r, l);
        let (k2r, k2l) = rhs(r + k1r * (h / 2.0), l + k1l * (h / 2.0));
        let (k3r, k3l) = rhs(r + k2r * (h / 2.0), l + k2l * (h / 2.0));
        let (k4r, k4l) = rhs(r + k3r * h, l + k3l * h);
        r += (k1r + (k2r + k3r) * 2.0 + k4r) * (h / 6.0);
        l += (k1l + (k2l + k3l) * 2.0 + k4l) * (h / 6.0);
    }
    Ok(FieldPair::new(r, l))
}

/// Richardson estimate of the observed convergence order from runs at N,
/// 2N, and 4N steps. Returns `None` when the successive differences sit at
/// the rounding floor (e.g. z = 0 or a transparent medium), where no order
/// is measurable.
pub fn convergence_order(
    state: &PreparedState,
    medium: &MediumConfig,
    input: &FieldPair,
    z: f64,
    cfg: &IntegratorConfig,
) -> Result<Option<f64>, OracleError> {
    let y1 = integrate(state, medium, input, z, cfg)?;
    let y2 = integrate(state, medium, input, z, &cfg.refined(2))?;
    let y4 = integrate(state, medium, input, z, &cfg.refined(4))?;
    let diff = |a: &FieldPair, b: &FieldPair| {
        (a.omega_r - b.omega_r)
            .norm()
            .max((a.omega_l - b.omega_l).norm())
    };
    let d1 = diff(&y1, &y2);
    let d2 = diff(&y2, &y4);
    let scale = input.max_norm().max(1e-300);
    if d1 <= 1e-13 * scale || d2 == 0.0 {
        return Ok(None);
    }
    Ok(Some((d1 / d2).log2()))
}
