//! Scenario configuration: a JSON document describing the prepared state,
//! medium, beam, grid, sampling distances, and output options.
//!
//! Every field has a documented default (α = 20, γ = 1, L = 1, n = 512,
//! extent = 3, balanced state, |l| = 1 beam at θ = π/4), so an empty config
//! reproduces the reference resonant scenario. Distances are given either
//! as absolute lengths or normalized to the absorption length with the
//! `"<value>xLabs"` suffix convention. The effective configuration (defaults
//! applied) is echoed into every output so runs can be reproduced from any
//! artifact.

use crate::beam::VortexBeamSpec;
use crate::bloch::{self, MediumConfig, PreparedState, TransitionParams};
use crate::grid::GridSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

/// Environment variable that overrides `outputs.directory`.
pub const OUTDIR_ENV: &str = "LAMBDA_VORTEX_OUTDIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field_err(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateSection {
    /// Magnitude of c₁ (real non-negative by convention).
    pub c1: f64,
    /// Relative phase carried by c₂, radians.
    pub phase_c: f64,
}

impl Default for StateSection {
    fn default() -> Self {
        Self {
            c1: std::f64::consts::FRAC_1_SQRT_2,
            phase_c: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MediumSection {
    /// Optical depth of the right-circular leg (and of the left one unless
    /// `alpha2` is set).
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub length: f64,
    /// Optional per-leg overrides for the left-circular transition.
    pub alpha2: Option<f64>,
    pub gamma2: Option<f64>,
    pub delta2: Option<f64>,
}

impl Default for MediumSection {
    fn default() -> Self {
        Self {
            alpha: 20.0,
            gamma: 1.0,
            delta: 0.0,
            length: 1.0,
            alpha2: None,
            gamma2: None,
            delta2: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BeamSection {
    /// Topological charge of the right-circular component.
    pub l: i32,
    pub waist: f64,
    pub theta: f64,
    pub psi: f64,
    pub epsilon: f64,
}

impl Default for BeamSection {
    fn default() -> Self {
        Self {
            l: 1,
            waist: 1.0,
            theta: FRAC_PI_4,
            psi: 0.0,
            epsilon: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n: usize,
    pub extent: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            n: GridSpec::DEFAULT_N,
            extent: GridSpec::DEFAULT_EXTENT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Vvfm,
    Csv,
    Ppm,
    Svg,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vvfm" => Ok(Self::Vvfm),
            "csv" => Ok(Self::Csv),
            "ppm" => Ok(Self::Ppm),
            "svg" => Ok(Self::Svg),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown output format '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputsSection {
    pub directory: String,
    pub formats: Vec<OutputFormat>,
    /// Glyph cells per axis in SVG polarization overlays.
    pub glyph_lattice: usize,
}

impl Default for OutputsSection {
    fn default() -> Self {
        Self {
            directory: "out".to_string(),
            formats: vec![
                OutputFormat::Vvfm,
                OutputFormat::Csv,
                OutputFormat::Ppm,
                OutputFormat::Svg,
                OutputFormat::Json,
            ],
            glyph_lattice: 16,
        }
    }
}

impl OutputsSection {
    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub seed: u64,
    pub trials: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 100,
        }
    }
}

/// A sampling distance: either an absolute length or a multiple of the
/// absorption length written as `"<value>xLabs"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZValue {
    Absolute(f64),
    Normalized(String),
}

impl ZValue {
    pub fn parse(token: &str) -> Result<Self, ConfigError> {
        let token = token.trim();
        if let Some(prefix) = token.strip_suffix("xLabs") {
            prefix
                .parse::<f64>()
                .map(|_| ZValue::Normalized(token.to_string()))
                .map_err(|_| field_err("z_list", format!("cannot parse '{token}'")))
        } else {
            token
                .parse::<f64>()
                .map(ZValue::Absolute)
                .map_err(|_| field_err("z_list", format!("cannot parse '{token}'")))
        }
    }
}

fn default_z_list() -> Vec<ZValue> {
    ["0xLabs", "1xLabs", "10xLabs", "30xLabs"]
        .iter()
        .map(|s| ZValue::Normalized(s.to_string()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub state: StateSection,
    pub medium: MediumSection,
    pub beam: BeamSection,
    pub grid: GridSection,
    pub z_list: Vec<ZValue>,
    pub outputs: OutputsSection,
    pub verify: VerifySection,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            state: StateSection::default(),
            medium: MediumSection::default(),
            beam: BeamSection::default(),
            grid: GridSection::default(),
            z_list: default_z_list(),
            outputs: OutputsSection::default(),
            verify: VerifySection::default(),
        }
    }
}

/// A resolved sampling distance with its filename label.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPoint {
    pub z: f64,
    /// z/L_abs; `None` when the medium is transparent (infinite L_abs).
    pub over_labs: Option<f64>,
    /// Filesystem-safe label, e.g. `0p5Labs` or `abs2`.
    pub label: String,
}

fn number_label(v: f64) -> String {
    let mut s = String::new();
    write!(s, "{v}").unwrap();
    s.replace('.', "p").replace('-', "m")
}

/// Domain-typed view of a validated configuration.
#[derive(Debug, Clone)]
pub struct ValidatedScenario {
    pub state: PreparedState,
    pub medium: MediumConfig,
    pub beam: VortexBeamSpec,
    pub grid: GridSpec,
    pub z_points: Vec<ZPoint>,
    pub outputs: OutputsSection,
    pub verify: VerifySection,
    /// The effective configuration as canonical JSON.
    pub effective_json: String,
}

impl ValidatedScenario {
    /// Non-fatal warnings about regime assumptions.
    pub fn advisories(&self) -> Vec<String> {
        let mut notes = Vec::new();
        let gamma_min = self
            .medium
            .transition_r()
            .gamma()
            .min(self.medium.transition_l().gamma());
        let ratio = self.beam.peak_rabi() / gamma_min;
        if ratio > bloch::WEAK_FIELD_ADVISORY_RATIO {
            notes.push(format!(
                "weak-field assumption is strained: max |omega|/gamma = {ratio:.3} exceeds {}",
                bloch::WEAK_FIELD_ADVISORY_RATIO
            ));
        }
        notes
    }
}

impl ScenarioConfig {
    /// Reads a config file, or returns the defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                Ok(serde_json::from_str(&text)?)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every section against the domain invariants and resolves the
    /// distance list. Error messages carry the offending field path.
    pub fn validate(&self) -> Result<ValidatedScenario, ConfigError> {
        let s = &self.state;
        if !s.c1.is_finite() || !(0.0..=1.0).contains(&s.c1) {
            return Err(field_err("state.c1", "must lie in [0, 1]"));
        }
        if !s.phase_c.is_finite() {
            return Err(field_err("state.phase_c", "must be finite"));
        }
        let state = PreparedState::new(s.c1, s.phase_c)
            .map_err(|e| field_err("state", e.to_string()))?;

        let m = &self.medium;
        let check_leg = |name: &str, alpha: f64, gamma: f64, delta: f64| {
            if !alpha.is_finite() || alpha < 0.0 {
                return Err(field_err(name, "optical depth must be >= 0"));
            }
            if !gamma.is_finite() || gamma <= 0.0 {
                return Err(field_err(name, "decay rate must be > 0"));
            }
            if !delta.is_finite() {
                return Err(field_err(name, "detuning must be finite"));
            }
            TransitionParams::new(alpha, gamma, delta)
                .map_err(|e| field_err(name, e.to_string()))
        };
        let leg_r = check_leg("medium.alpha/gamma/delta", m.alpha, m.gamma, m.delta)?;
        let leg_l = check_leg(
            "medium.alpha2/gamma2/delta2",
            m.alpha2.unwrap_or(m.alpha),
            m.gamma2.unwrap_or(m.gamma),
            m.delta2.unwrap_or(m.delta),
        )?;
        if !m.length.is_finite() || m.length <= 0.0 {
            return Err(field_err("medium.length", "must be > 0"));
        }
        let medium = MediumConfig::new(leg_r, leg_l, m.length)
            .map_err(|e| field_err("medium", e.to_string()))?;

        let b = &self.beam;
        if !b.waist.is_finite() || b.waist <= 0.0 {
            return Err(field_err("beam.waist", "must be > 0"));
        }
        if !b.theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&b.theta) {
            return Err(field_err("beam.theta", "must lie in [0, pi/2]"));
        }
        if !b.psi.is_finite() {
            return Err(field_err("beam.psi", "must be finite"));
        }
        if !b.epsilon.is_finite() || b.epsilon < 0.0 {
            return Err(field_err("beam.epsilon", "must be >= 0"));
        }
        let beam = VortexBeamSpec::new(b.l, b.waist, b.theta, b.psi, b.epsilon)
            .map_err(|e| field_err("beam", e.to_string()))?;

        let g = &self.grid;
        if g.n < 16 {
            return Err(field_err("grid.n", "must be at least 16"));
        }
        if !g.extent.is_finite() || g.extent <= 0.0 {
            return Err(field_err("grid.extent", "must be > 0"));
        }
        let grid = GridSpec::new(g.n, g.extent).map_err(|e| field_err("grid", e.to_string()))?;

        let l_abs = medium.absorption_length();
        let mut z_points = Vec::with_capacity(self.z_list.len());
        for (i, zv) in self.z_list.iter().enumerate() {
            let path = format!("z_list[{i}]");
            let point = match zv {
                ZValue::Absolute(z) => {
                    if !z.is_finite() || *z < 0.0 {
                        return Err(field_err(&path, "must be a finite length >= 0"));
                    }
                    let over = (l_abs.is_finite()).then(|| z / l_abs);
                    ZPoint {
                        z: *z,
                        over_labs: over,
                        label: over.map_or_else(
                            || format!("abs{}", number_label(*z)),
                            |v| format!("{}Labs", number_label(v)),
                        ),
                    }
                }
                ZValue::Normalized(text) => {
                    let Some(prefix) = text.strip_suffix("xLabs") else {
                        return Err(field_err(&path, "normalized distances end in 'xLabs'"));
                    };
                    let v: f64 = prefix
                        .trim()
                        .parse()
                        .map_err(|_| field_err(&path, format!("cannot parse '{text}'")))?;
                    if !v.is_finite() || v < 0.0 {
                        return Err(field_err(&path, "must be >= 0"));
                    }
                    if !l_abs.is_finite() {
                        return Err(field_err(
                            &path,
                            "normalized distance needs a positive optical depth",
                        ));
                    }
                    ZPoint {
                        z: v * l_abs,
                        over_labs: Some(v),
                        label: format!("{}Labs", number_label(v)),
                    }
                }
            };
            z_points.push(point);
        }

        if self.outputs.glyph_lattice < 2 {
            return Err(field_err("outputs.glyph_lattice", "must be at least 2"));
        }
        if self.verify.trials == 0 {
            return Err(field_err("verify.trials", "must be at least 1"));
        }

        Ok(ValidatedScenario {
            state,
            medium,
            beam,
            grid,
            z_points,
            outputs: self.outputs.clone(),
            verify: self.verify,
            effective_json: self.to_json(),
        })
    }
}

/// Scalar overrides applied on top of a loaded config, mirroring the JSON
/// paths one-to-one.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub state_c1: Option<f64>,
    pub state_phase_c: Option<f64>,
    pub medium_alpha: Option<f64>,
    pub medium_gamma: Option<f64>,
    pub medium_delta: Option<f64>,
    pub medium_length: Option<f64>,
    pub medium_alpha2: Option<f64>,
    pub medium_gamma2: Option<f64>,
    pub medium_delta2: Option<f64>,
    pub beam_l: Option<i32>,
    pub beam_waist: Option<f64>,
    pub beam_theta: Option<f64>,
    pub beam_psi: Option<f64>,
    pub beam_epsilon: Option<f64>,
    pub grid_n: Option<usize>,
    pub grid_extent: Option<f64>,
    pub z_list: Option<String>,
    pub outputs_directory: Option<String>,
    pub outputs_formats: Option<String>,
    pub outputs_glyph_lattice: Option<usize>,
    pub verify_seed: Option<u64>,
    pub verify_trials: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ScenarioConfig) -> Result<(), ConfigError> {
        macro_rules! set {
            ($field:expr, $target:expr) => {
                if let Some(v) = &$field {
                    $target = v.clone();
                }
            };
        }
        set!(self.state_c1, config.state.c1);
        set!(self.state_phase_c, config.state.phase_c);
        set!(self.medium_alpha, config.medium.alpha);
        set!(self.medium_gamma, config.medium.gamma);
        set!(self.medium_delta, config.medium.delta);
        set!(self.medium_length, config.medium.length);
        if self.medium_alpha2.is_some() {
            config.medium.alpha2 = self.medium_alpha2;
        }
        if self.medium_gamma2.is_some() {
            config.medium.gamma2 = self.medium_gamma2;
        }
        if self.medium_delta2.is_some() {
            config.medium.delta2 = self.medium_delta2;
        }
        set!(self.beam_l, config.beam.l);
        set!(self.beam_waist, config.beam.waist);
        set!(self.beam_theta, config.beam.theta);
        set!(self.beam_psi, config.beam.psi);
        set!(self.beam_epsilon, config.beam.epsilon);
        set!(self.grid_n, config.grid.n);
        set!(self.grid_extent, config.grid.extent);
        set!(self.outputs_directory, config.outputs.directory);
        set!(self.outputs_glyph_lattice, config.outputs.glyph_lattice);
        set!(self.verify_seed, config.verify.seed);
        set!(self.verify_trials, config.verify.trials);
        if let Some(list) = &self.z_list {
            config.z_list = list
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(ZValue::parse)
                .collect::<Result<_, _>>()?;
        }
        if let Some(formats) = &self.outputs_formats {
            config.outputs.formats = formats
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<OutputFormat>()
                        .map_err(|e| field_err("outputs.formats", e))
                })
                .collect::<Result<_, _>>()?;
        }
        Ok(())
    }
}
