//! C ABI over the lambda-vortex library.
//!
//! Conventions:
//! - Opaque handles (`LvState`, `LvMedium`, `LvBeam`, `LvFieldMap`) are
//!   created by `lv_*_new`/`lv_*_evaluate` and released by the matching
//!   `lv_*_free`; freeing NULL is a no-op.
//! - Every fallible call returns an [`LvStatus`] code and writes its result
//!   through out-pointers, which are only written on `LV_OK`.
//! - Angles are radians; complex numbers are (re, im) doubles; undefined
//!   polarization angles are reported as NaN with class
//!   `LV_POLARIZATION_UNDEFINED`.
//!
//! The C header is generated into `include/lambda_vortex.h` at build time.

use lambda_vortex::beam::{self, PolarCoordinate, VortexBeamSpec};
use lambda_vortex::bloch::{
    self, BlochError, FieldPair, MediumConfig, PreparedState, TransitionParams,
};
use lambda_vortex::format::{self, MapData};
use lambda_vortex::grid::{self, FieldMap, GridSpec};
use lambda_vortex::oracle::{self, IntegratorConfig};
use lambda_vortex::polarimetry::{self, PolarizationClass};
use lambda_vortex::C64;
use std::ffi::{c_char, CStr};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LvStatus {
    LvOk = 0,
    /// A required pointer argument was NULL.
    LvNullPointer = 1,
    /// A parameter violated its documented range.
    LvInvalidArgument = 2,
    /// The medium does not attenuate (Im[X] >= 0), so no characteristic
    /// distance exists.
    LvNonAbsorbing = 3,
    /// X = 0 with the series fallback disabled.
    LvDegenerate = 4,
    /// File could not be written or read.
    LvIoError = 5,
    /// The requested integration would exceed the step cap.
    LvStepOverflow = 6,
}

fn status_of(err: &BlochError) -> LvStatus {
    match err {
        BlochError::NonAbsorbing { .. } => LvStatus::LvNonAbsorbing,
        BlochError::DegenerateCoefficients => LvStatus::LvDegenerate,
        _ => LvStatus::LvInvalidArgument,
    }
}

/// Prepared ground-state superposition (opaque).
pub struct LvState {
    inner: PreparedState,
}

/// Medium parameters for both legs (opaque).
pub struct LvMedium {
    inner: MediumConfig,
}

/// Entrance vector vortex beam parameters (opaque).
pub struct LvBeam {
    inner: VortexBeamSpec,
}

/// Sampled transverse field map (opaque).
pub struct LvFieldMap {
    inner: FieldMap,
}

/// Complex number as a (re, im) pair of doubles.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LvComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for LvComplex {
    fn from(c: C64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<LvComplex> for C64 {
    fn from(c: LvComplex) -> Self {
        C64::new(c.re, c.im)
    }
}

/// Right- and left-circular Rabi amplitudes.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LvFieldPair {
    pub omega_r: LvComplex,
    pub omega_l: LvComplex,
}

impl From<FieldPair> for LvFieldPair {
    fn from(f: FieldPair) -> Self {
        Self {
            omega_r: f.omega_r.into(),
            omega_l: f.omega_l.into(),
        }
    }
}

impl From<LvFieldPair> for FieldPair {
    fn from(f: LvFieldPair) -> Self {
        FieldPair::new(f.omega_r.into(), f.omega_l.into())
    }
}

/// Polarization classification of a Stokes sample.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LvPolarizationClass {
    LvPolarizationLinear = 0,
    LvPolarizationLeftCircular = 1,
    LvPolarizationRightCircular = 2,
    LvPolarizationEllipticalLeft = 3,
    LvPolarizationEllipticalRight = 4,
    LvPolarizationUndefined = 5,
}

impl From<PolarizationClass> for LvPolarizationClass {
    fn from(c: PolarizationClass) -> Self {
        match c {
            PolarizationClass::Linear => Self::LvPolarizationLinear,
            PolarizationClass::LeftCircular => Self::LvPolarizationLeftCircular,
            PolarizationClass::RightCircular => Self::LvPolarizationRightCircular,
            PolarizationClass::EllipticalLeft => Self::LvPolarizationEllipticalLeft,
            PolarizationClass::EllipticalRight => Self::LvPolarizationEllipticalRight,
            PolarizationClass::Undefined => Self::LvPolarizationUndefined,
        }
    }
}

/// Stokes parameters plus ellipse angles; `zeta`/`xi` are NaN when the
/// sample is below the intensity floor.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LvStokes {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub zeta: f64,
    pub xi: f64,
    pub classification: LvPolarizationClass,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a prepared state from the magnitude of c1 and the relative phase
/// carried by c2.
///
/// # Safety
/// `out` must be a valid pointer to an `LvState*` slot.
#[no_mangle]
pub unsafe extern "C" fn lv_state_new(
    c1_magnitude: f64,
    relative_phase: f64,
    out: *mut *mut LvState,
) -> LvStatus {
    if out.is_null() {
        return LvStatus::LvNullPointer;
    }
    match PreparedState::new(c1_magnitude, relative_phase) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(LvState { inner }));
            LvStatus::LvOk
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `state` must be NULL or a pointer from `lv_state_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lv_state_free(state: *mut LvState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Builds a medium from per-leg optical depth, decay rate, and detuning,
/// plus the physical length.
///
/// # Safety
/// `out` must be a valid pointer to an `LvMedium*` slot.
#[no_mangle]
pub unsafe extern "C" fn lv_medium_new(
    alpha_r: f64,
    gamma_r: f64,
    delta_r: f64,
    alpha_l: f64,
    gamma_l: f64,
    delta_l: f64,
    length: f64,
    out: *mut *mut LvMedium,
) -> LvStatus {
    if out.is_null() {
        return LvStatus::LvNullPointer;
    }
    let build = || -> Result<MediumConfig, BlochError> {
        MediumConfig::new(
            TransitionParams::new(alpha_r, gamma_r, delta_r)?,
            TransitionParams::new(alpha_l, gamma_l, delta_l)?,
            length,
        )
    };
    match build() {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(LvMedium { inner }));
            LvStatus::LvOk
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `medium` must be NULL or a pointer from `lv_medium_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lv_medium_free(medium: *mut LvMedium) {
    if !medium.is_null() {
        drop(Box::from_raw(medium));
    }
}

/// Builds a vortex beam: topological charge of the right-circular
/// component, shared waist, mixing angle theta in [0, pi/2], relative phase
/// psi, and overall Rabi scale epsilon.
///
/// # Safety
/// `out` must be a valid pointer to an `LvBeam*` slot.
#[no_mangle]
pub unsafe extern "C" fn lv_beam_new(
    charge: i32,
    waist: f64,
    theta: f64,
    psi: f64,
    epsilon: f64,
    out: *mut *mut LvBeam,
) -> LvStatus {
    if out.is_null() {
        return LvStatus::LvNullPointer;
    }
    match VortexBeamSpec::new(charge, waist, theta, psi, epsilon) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(LvBeam { inner }));
            LvStatus::LvOk
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `beam` must be NULL or a pointer from `lv_beam_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lv_beam_free(beam: *mut LvBeam) {
    if !beam.is_null() {
        drop(Box::from_raw(beam));
    }
}

/// Entrance fields of the beam at polar point (r, phi); phi is wrapped
/// into [0, 2pi).
///
/// # Safety
/// `beam` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lv_input_fields(
    beam: *const LvBeam,
    r: f64,
    phi: f64,
    out: *mut LvFieldPair,
) -> LvStatus {
    if beam.is_null() || out.is_null() {
        return LvStatus::LvNullPointer;
    }
    if !r.is_finite() || r < 0.0 || !phi.is_finite() {
        return LvStatus::LvInvalidArgument;
    }
    let phi = phi.rem_euclid(2.0 * std::f64::consts::PI);
    let point = match PolarCoordinate::new(r, phi) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    *out = beam::input_fields(&(*beam).inner, &point).into();
    LvStatus::LvOk
}

/// Propagates the entrance fields to distance z with the analytic solution.
///
/// # Safety
/// `state`, `medium`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lv_propagate(
    state: *const LvState,
    medium: *const LvMedium,
    input: LvFieldPair,
    z: f64,
    out: *mut LvFieldPair,
) -> LvStatus {
    if state.is_null() || medium.is_null() || out.is_null() {
        return LvStatus::LvNullPointer;
    }
    if !z.is_finite() || z < 0.0 {
        return LvStatus::LvInvalidArgument;
    }
    let result = bloch::propagate(&(*state).inner, &(*medium).inner, &input.into(), z);
    *out = result.into();
    LvStatus::LvOk
}

/// Stationary fields after the damped component has died out (symmetric
/// absorbing regime).
///
/// # Safety
/// `state` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lv_asymptotic_fields(
    state: *const LvState,
    input: LvFieldPair,
    out: *mut LvFieldPair,
) -> LvStatus {
    if state.is_null() || out.is_null() {
        return LvStatus::LvNullPointer;
    }
    *out = bloch::asymptotic_fields(&(*state).inner, &input.into()).into();
    LvStatus::LvOk
}

/// Characteristic attenuation distance; fails with LV_NON_ABSORBING when
/// Im[X] >= 0.
///
/// # Safety
/// `state`, `medium`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lv_characteristic_distance(
    state: *const LvState,
    medium: *const LvMedium,
    out: *mut f64,
) -> LvStatus {
    if state.is_null() || medium.is_null() || out.is_null() {
        return LvStatus::LvNullPointer;
    }
    match bloch::characteristic_distance(&(*state).inner, &(*medium).inner) {
        Ok(zc) => {
            *out = zc;
            LvStatus::LvOk
        }
        Err(e) => status_of(&e),
    }
}

/// First-order steady-state coherences (rho_g1e, rho_g2e) for the given
/// fields.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lv_steady_coherences(
    state: *const LvState,
    medium: *const LvMedium,
    fields: LvFieldPair,
    out_rho_g1e: *mut LvComplex,
    out_rho_g2e: *mut LvComplex,
) -> LvStatus {
    if state.is_null() || medium.is_null() || out_rho_g1e.is_null() || out_rho_g2e.is_null() {
        return LvStatus::LvNullPointer;
    }
    let (r1, r2) = bloch::steady_coherences(&(*state).inner, &(*medium).inner, &fields.into());
    *out_rho_g1e = r1.into();
    *out_rho_g2e = r2.into();
    LvStatus::LvOk
}

/// Stokes parameters and polarization ellipse of a field pair.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lv_stokes(fields: LvFieldPair, out: *mut LvStokes) -> LvStatus {
    if out.is_null() {
        return LvStatus::LvNullPointer;
    }
    let s = polarimetry::stokes(&fields.into());
    *out = LvStokes {
        s0: s.s0,
        s1: s.s1,
        s2: s.s2,
        s3: s.s3,
        zeta: s.zeta.unwrap_or(f64::NAN),
        xi: s.xi.unwrap_or(f64::NAN),
        classification: s.class.into(),
    };
    LvStatus::LvOk
}

/// Independent fixed-step RK4 integration of the propagation equations,
/// for cross-checking the analytic path from a foreign runtime.
///
/// # Safety
/// `state`, `medium`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lv_oracle_integrate(
    state: *const LvState,
    medium: *const LvMedium,
    input: LvFieldPair,
    z: f64,
    steps_per_absorption_length: u32,
    out: *mut LvFieldPair,
) -> LvStatus {
    if state.is_null() || medium.is_null() || out.is_null() {
        return LvStatus::LvNullPointer;
    }
    if !z.is_finite() || z < 0.0 {
        return LvStatus::LvInvalidArgument;
    }
    let cfg = match IntegratorConfig::new(steps_per_absorption_length as usize) {
        Ok(cfg) => cfg,
        Err(_) => return LvStatus::LvInvalidArgument,
    };
    match oracle::integrate(&(*state).inner, &(*medium).inner, &input.into(), z, &cfg) {
        Ok(fields) => {
            *out = fields.into();
            LvStatus::LvOk
        }
        Err(oracle::OracleError::StepOverflow(_)) => LvStatus::LvStepOverflow,
        Err(_) => LvStatus::LvInvalidArgument,
    }
}

/// Evaluates the field map on an n-by-n grid spanning `extent` waists.
///
/// # Safety
/// `state`, `medium`, `beam`, and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lv_field_map_evaluate(
    state: *const LvState,
    medium: *const LvMedium,
    beam: *const LvBeam,
    n: u32,
    extent: f64,
    z: f64,
    out: *mut *mut LvFieldMap,
) -> LvStatus {
    if state.is_null() || medium.is_null() || beam.is_null() || out.is_null() {
        return LvStatus::LvNullPointer;
    }
    if !z.is_finite() || z < 0.0 {
        return LvStatus::LvInvalidArgument;
    }
    let grid = match GridSpec::new(n as usize, extent) {
        Ok(g) => g,
        Err(e) => return status_of(&e),
    };
    match grid::evaluate_field_map(
        &(*state).inner,
        &(*medium).inner,
        &(*beam).inner,
        &grid,
        z,
    ) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(LvFieldMap { inner }));
            LvStatus::LvOk
        }
        Err(e) => status_of(&e),
    }
}

/// Samples per axis of a field map.
///
/// # Safety
/// `map` must be a valid pointer from `lv_field_map_evaluate`.
#[no_mangle]
pub unsafe extern "C" fn lv_field_map_n(map: *const LvFieldMap) -> u32 {
    if map.is_null() {
        return 0;
    }
    (*map).inner.grid().n() as u32
}

/// Copies one component (0 = right-circular, 1 = left-circular) into
/// `buffer`, row-major, `len` elements; `len` must equal n*n.
///
/// # Safety
/// `map` must be valid and `buffer` must point to at least `len` writable
/// `LvComplex` slots.
#[no_mangle]
pub unsafe extern "C" fn lv_field_map_component(
    map: *const LvFieldMap,
    component: u32,
    buffer: *mut LvComplex,
    len: usize,
) -> LvStatus {
    if map.is_null() || buffer.is_null() {
        return LvStatus::LvNullPointer;
    }
    let inner = &(*map).inner;
    let plane = match component {
        0 => inner.omega_r(),
        1 => inner.omega_l(),
        _ => return LvStatus::LvInvalidArgument,
    };
    if len != plane.len() {
        return LvStatus::LvInvalidArgument;
    }
    let out = std::slice::from_raw_parts_mut(buffer, len);
    for (slot, value) in out.iter_mut().zip(plane) {
        *slot = (*value).into();
    }
    LvStatus::LvOk
}

/// Writes a field map to a VVFM container file.
///
/// # Safety
/// `map` must be valid and `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn lv_field_map_write_vvfm(
    map: *const LvFieldMap,
    path: *const c_char,
) -> LvStatus {
    if map.is_null() || path.is_null() {
        return LvStatus::LvNullPointer;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        return LvStatus::LvInvalidArgument;
    };
    match format::write_map(
        std::path::Path::new(path),
        &MapData::Field((*map).inner.clone()),
    ) {
        Ok(()) => LvStatus::LvOk,
        Err(_) => LvStatus::LvIoError,
    }
}

/// # Safety
/// `map` must be NULL or a pointer from `lv_field_map_evaluate`, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn lv_field_map_free(map: *mut LvFieldMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}
