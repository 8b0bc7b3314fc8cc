//! Propagation of optical vector vortex beams through a coherently prepared
//! three-level Λ medium.
//!
//! The medium is an atomic ensemble prepared in a ground-state superposition
//! (a "phaseonium"). A pair of Laguerre–Gaussian modes with opposite circular
//! polarizations and opposite orbital angular momentum charges ±l drives the
//! two legs of the Λ system. In the weak-field regime the coupled propagation
//! equations are linear with constant coefficients, so the field evolution
//! along z has a closed-form solution. This crate provides:
//!
//! - [`bloch`]: steady-state coherences, propagation coefficients, the
//!   analytic z-propagator, asymptotic fields, and characteristic-distance
//!   analysis.
//! - [`beam`]: Laguerre–Gaussian vortex beam synthesis on the transverse
//!   plane.
//! - [`polarimetry`]: Stokes parameters, ellipticity/orientation,
//!   polarization classification, and azimuthal window/petal analysis.
//! - [`grid`]: transverse-plane sampling of fields, absorption, and Stokes
//!   maps.
//! - [`format`]: the VVFM binary map container and CSV export.
//! - [`render`]: PPM heatmaps and SVG polarization-glyph overlays.
//! - [`oracle`]: an independent fixed-step RK4 integrator of the coupled
//!   propagation equations, used to validate the analytic propagator.
//! - [`scenario`]: JSON scenario configuration shared by the CLI and the
//!   verification suites.
//! - [`verify`]: seeded self-check suites behind the `verify` subcommand.
//!
//! All internal computations use the decay rate γ as the frequency unit and
//! the medium length L as the length unit; distances are reported both raw
//! and normalized to the absorption length.

pub mod beam;
pub mod bloch;
pub mod format;
pub mod grid;
pub mod oracle;
pub mod polarimetry;
pub mod render;
pub mod scenario;
pub mod verify;

pub use beam::{PolarCoordinate, TextureLabel, VortexBeamSpec};
pub use bloch::{
    FieldPair, MediumConfig, PreparedState, PropagationCoefficients, TransitionParams,
};
pub use grid::{AbsorptionMap, FieldMap, GridSpec, StokesMap};
pub use polarimetry::{PolarizationClass, StokesSample};

/// Complex field/coefficient scalar used throughout.
pub type C64 = num_complex::Complex64;
