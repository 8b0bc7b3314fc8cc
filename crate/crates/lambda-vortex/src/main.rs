//! Command-line front end: loads a scenario config, runs the requested
//! analysis, and writes maps, heatmaps, glyph overlays, and JSON reports
//! into the output directory. Every subcommand is deterministic for a given
//! config; only `verify` consumes randomness, from an explicit seed.

use clap::{Args, Parser, Subcommand};
use lambda_vortex::bloch::{self, BlochError};
use lambda_vortex::format::{self, MapData};
use lambda_vortex::grid::{self, DEFAULT_RING_SAMPLES};
use lambda_vortex::polarimetry::{self, RingFeature};
use lambda_vortex::render::{self, Palette};
use lambda_vortex::scenario::{
    ConfigError, Overrides, OutputFormat, ScenarioConfig, ValidatedScenario, ZPoint, OUTDIR_ENV,
};
use lambda_vortex::verify;
use lambda_vortex::C64;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Debug, thiserror::Error)]
enum AppError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Domain(#[from] BlochError),
    #[error("verification failed")]
    VerificationFailed,
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Format(#[from] format::FormatError),
    #[error("{0}")]
    Render(#[from] render::RenderError),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) | AppError::Domain(_) => EXIT_CONFIG,
            AppError::VerificationFailed => EXIT_VERIFY,
            AppError::Io(_) | AppError::Format(_) | AppError::Render(_) => EXIT_IO,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "lambda-vortex",
    version,
    about = "Vector vortex beam propagation through a coherently prepared lambda medium"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Scenario selection plus per-field overrides mirroring the JSON paths.
#[derive(Args, Debug, Default)]
struct ConfigArgs {
    /// Scenario JSON file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "state.c1", value_name = "MAG")]
    state_c1: Option<f64>,
    #[arg(long = "state.phase_c", value_name = "RAD", allow_hyphen_values = true)]
    state_phase_c: Option<f64>,
    /// Optical depth for both legs unless a *2 override is given.
    #[arg(long = "medium.alpha", value_name = "ALPHA")]
    medium_alpha: Option<f64>,
    #[arg(long = "medium.gamma", value_name = "GAMMA")]
    medium_gamma: Option<f64>,
    #[arg(long = "medium.delta", value_name = "DELTA", allow_hyphen_values = true)]
    medium_delta: Option<f64>,
    #[arg(long = "medium.length", value_name = "L")]
    medium_length: Option<f64>,
    #[arg(long = "medium.alpha2", value_name = "ALPHA")]
    medium_alpha2: Option<f64>,
    #[arg(long = "medium.gamma2", value_name = "GAMMA")]
    medium_gamma2: Option<f64>,
    #[arg(long = "medium.delta2", value_name = "DELTA", allow_hyphen_values = true)]
    medium_delta2: Option<f64>,
    #[arg(long = "beam.l", value_name = "CHARGE", allow_hyphen_values = true)]
    beam_l: Option<i32>,
    #[arg(long = "beam.waist", value_name = "W")]
    beam_waist: Option<f64>,
    #[arg(long = "beam.theta", value_name = "RAD")]
    beam_theta: Option<f64>,
    #[arg(long = "beam.psi", value_name = "RAD")]
    beam_psi: Option<f64>,
    #[arg(long = "beam.epsilon", value_name = "RABI")]
    beam_epsilon: Option<f64>,
    #[arg(long = "grid.n", value_name = "N")]
    grid_n: Option<usize>,
    #[arg(long = "grid.extent", value_name = "WAISTS")]
    grid_extent: Option<f64>,
    /// Comma-separated distances, absolute or '<v>xLabs'.
    #[arg(long = "z-list", value_name = "LIST")]
    z_list: Option<String>,
    #[arg(long = "outputs.directory", value_name = "DIR")]
    outputs_directory: Option<String>,
    /// Comma-separated subset of vvfm,csv,ppm,svg,json.
    #[arg(long = "outputs.formats", value_name = "LIST")]
    outputs_formats: Option<String>,
    #[arg(long = "outputs.glyph_lattice", value_name = "CELLS")]
    outputs_glyph_lattice: Option<usize>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ValidatedScenario, AppError> {
        let mut config = ScenarioConfig::load(self.config.as_deref())?;
        let overrides = Overrides {
            state_c1: self.state_c1,
            state_phase_c: self.state_phase_c,
            medium_alpha: self.medium_alpha,
            medium_gamma: self.medium_gamma,
            medium_delta: self.medium_delta,
            medium_length: self.medium_length,
            medium_alpha2: self.medium_alpha2,
            medium_gamma2: self.medium_gamma2,
            medium_delta2: self.medium_delta2,
            beam_l: self.beam_l,
            beam_waist: self.beam_waist,
            beam_theta: self.beam_theta,
            beam_psi: self.beam_psi,
            beam_epsilon: self.beam_epsilon,
            grid_n: self.grid_n,
            grid_extent: self.grid_extent,
            z_list: self.z_list.clone(),
            outputs_directory: self.outputs_directory.clone(),
            outputs_formats: self.outputs_formats.clone(),
            outputs_glyph_lattice: self.outputs_glyph_lattice,
            ..Default::default()
        };
        overrides.apply(&mut config)?;
        if let Ok(dir) = std::env::var(OUTDIR_ENV) {
            if !dir.is_empty() {
                config.outputs.directory = dir;
            }
        }
        Ok(config.validate()?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the propagation coefficients, absorption scales, and z_c.
    Coeffs(ConfigArgs),
    /// Evaluate field maps and intensity heatmaps at each distance.
    Propagate(ConfigArgs),
    /// Evaluate susceptibility maps and azimuthal window counts.
    Absorption(ConfigArgs),
    /// Evaluate Stokes maps, polarization summaries, and glyph overlays.
    Stokes(ConfigArgs),
    /// Scan the characteristic distance over detuning.
    ZcScan {
        #[command(flatten)]
        config: ConfigArgs,
        /// Lower end of the scan, in units of gamma.
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        delta_min: f64,
        /// Upper end of the scan, in units of gamma.
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        delta_max: f64,
        #[arg(long, default_value_t = 61)]
        steps: usize,
    },
    /// Run the seeded self-verification suites.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the thin-medium diffraction condition L*lambda/w^2 < pi.
    ParaxialCheck {
        #[arg(long)]
        wavelength: f64,
        #[arg(long)]
        waist: f64,
        #[arg(long)]
        length: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Coeffs(args) => cmd_coeffs(&args),
        Command::Propagate(args) => cmd_propagate(&args),
        Command::Absorption(args) => cmd_absorption(&args),
        Command::Stokes(args) => cmd_stokes(&args),
        Command::ZcScan {
            config,
            delta_min,
            delta_max,
            steps,
        } => cmd_zc_scan(&config, delta_min, delta_max, steps),
        Command::Verify {
            config,
            trials,
            seed,
        } => cmd_verify(&config, trials, seed),
        Command::ParaxialCheck {
            wavelength,
            waist,
            length,
        } => cmd_paraxial_check(wavelength, waist, length),
    }
}

/// Creates the output directory, echoes the effective config into it, and
/// prints any advisories.
fn prepare_outputs(scenario: &ValidatedScenario) -> Result<PathBuf, AppError> {
    let dir = PathBuf::from(&scenario.outputs.directory);
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("scenario_effective.json"), &scenario.effective_json)?;
    for note in scenario.advisories() {
        eprintln!("advisory: {note}");
    }
    Ok(dir)
}

fn fmt_c(c: C64) -> String {
    format!("{:.9e} {:+.9e}i", c.re, c.im)
}

fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), AppError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct CoeffsAtZ {
    z: f64,
    z_over_labs: Option<f64>,
    q1: [f64; 2],
    q2: [f64; 2],
    q3: [f64; 2],
    q4: [f64; 2],
}

#[derive(Serialize)]
struct CoeffsReport {
    beta_r: [f64; 2],
    beta_l: [f64; 2],
    x: [f64; 2],
    l_abs_r: f64,
    l_abs_l: f64,
    zc: Option<f64>,
    zc_over_labs: Option<f64>,
    zc_note: Option<String>,
    per_z: Vec<CoeffsAtZ>,
}

fn cpair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

fn cmd_coeffs(args: &ConfigArgs) -> Result<(), AppError> {
    let scenario = args.resolve()?;
    let outdir = prepare_outputs(&scenario)?;
    let (state, medium) = (&scenario.state, &scenario.medium);

    let beta_r = medium.beta_r();
    let beta_l = medium.beta_l();
    let x = beta_r * state.population_g1() + beta_l * state.population_g2();
    let l_abs = medium.absorption_length_r();
    let zc = bloch::characteristic_distance(state, medium);

    println!("beta_r = {}", fmt_c(beta_r));
    println!("beta_l = {}", fmt_c(beta_l));
    println!("X      = {}", fmt_c(x));
    println!("L_abs  = {l_abs:.9e} (R leg), {:.9e} (L leg)", medium.absorption_length_l());
    match &zc {
        Ok(z) => println!("z_c    = {:.9e}  (z_c/L_abs = {:.9})", z, z / l_abs),
        Err(e) => println!("z_c    = undefined ({e})"),
    }

    let mut per_z = Vec::new();
    for point in &scenario.z_points {
        let co = bloch::coefficients(state, medium, point.z);
        println!(
            "z = {:.6e} (label {}): q1 = {}, q2 = {}, q3 = {}, q4 = {}",
            point.z,
            point.label,
            fmt_c(co.q1),
            fmt_c(co.q2),
            fmt_c(co.q3),
            fmt_c(co.q4)
        );
        per_z.push(CoeffsAtZ {
            z: point.z,
            z_over_labs: point.over_labs,
            q1: cpair(co.q1),
            q2: cpair(co.q2),
            q3: cpair(co.q3),
            q4: cpair(co.q4),
        });
    }

    if scenario.outputs.wants(OutputFormat::Json) {
        let report = CoeffsReport {
            beta_r: cpair(beta_r),
            beta_l: cpair(beta_l),
            x: cpair(x),
            l_abs_r: l_abs,
            l_abs_l: medium.absorption_length_l(),
            zc: zc.as_ref().ok().copied(),
            zc_over_labs: zc.as_ref().ok().map(|z| z / l_abs),
            zc_note: zc.err().map(|e| e.to_string()),
            per_z,
        };
        write_json(&outdir.join("coeffs.json"), &report)?;
    }
    Ok(())
}

fn cmd_propagate(args: &ConfigArgs) -> Result<(), AppError> {
    let scenario = args.resolve()?;
    let outdir = prepare_outputs(&scenario)?;
    for point in &scenario.z_points {
        let map = grid::evaluate_field_map(
            &scenario.state,
            &scenario.medium,
            &scenario.beam,
            &scenario.grid,
            point.z,
        )?;
        if scenario.outputs.wants(OutputFormat::Vvfm) {
            format::write_map(
                &outdir.join(format!("field_{}.vvfm", point.label)),
                &MapData::Field(map.clone()),
            )?;
        }
        if scenario.outputs.wants(OutputFormat::Csv) {
            format::write_field_csv(&outdir.join(format!("field_{}.csv", point.label)), &map)?;
        }
        if scenario.outputs.wants(OutputFormat::Ppm) {
            render::render_heatmap(
                &map.intensity_r(),
                &scenario.grid,
                &outdir.join(format!("intensity_r_{}.ppm", point.label)),
                Palette::GrayInverted,
            )?;
            render::render_heatmap(
                &map.intensity_total(),
                &scenario.grid,
                &outdir.join(format!("intensity_total_{}.ppm", point.label)),
                Palette::GrayInverted,
            )?;
        }
        let peak = map.max_amplitude();
        println!(
            "z label {}: wrote field map (peak |omega| = {:.6e})",
            point.label, peak
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct WindowReport {
    z: f64,
    z_over_labs: Option<f64>,
    component: String,
    ring_radius: f64,
    count: Option<usize>,
    uniform: bool,
    note: Option<String>,
    centers: Vec<f64>,
}

fn analyze_ring(
    plane: &[f64],
    scenario: &ValidatedScenario,
    point: &ZPoint,
    component: &str,
    reports: &mut Vec<WindowReport>,
) {
    let profile = grid::ring_profile(
        plane,
        &scenario.grid,
        scenario.beam.waist(),
        scenario.beam.waist(),
        DEFAULT_RING_SAMPLES,
    );
    match polarimetry::count_azimuthal_windows(
        &profile,
        polarimetry::DEFAULT_WINDOW_THRESHOLD,
        RingFeature::Below,
    ) {
        Ok(w) => {
            println!(
                "z label {}: {component} transparency windows = {}{}",
                point.label,
                w.count,
                if w.uniform { " (uniform)" } else { "" }
            );
            reports.push(WindowReport {
                z: point.z,
                z_over_labs: point.over_labs,
                component: component.to_string(),
                ring_radius: scenario.beam.waist(),
                count: Some(w.count),
                uniform: w.uniform,
                note: None,
                centers: w.centers,
            });
        }
        Err(e) => {
            println!("z label {}: {component} ring analysis unavailable ({e})", point.label);
            reports.push(WindowReport {
                z: point.z,
                z_over_labs: point.over_labs,
                component: component.to_string(),
                ring_radius: scenario.beam.waist(),
                count: None,
                uniform: false,
                note: Some(e.to_string()),
                centers: Vec::new(),
            });
        }
    }
}

fn cmd_absorption(args: &ConfigArgs) -> Result<(), AppError> {
    let scenario = args.resolve()?;
    let outdir = prepare_outputs(&scenario)?;
    let mut window_reports = Vec::new();
    for point in &scenario.z_points {
        let map = grid::evaluate_absorption_map(
            &scenario.state,
            &scenario.medium,
            &scenario.beam,
            &scenario.grid,
            point.z,
        )?;
        if scenario.outputs.wants(OutputFormat::Vvfm) {
            format::write_map(
                &outdir.join(format!("absorption_{}.vvfm", point.label)),
                &MapData::Absorption(map.clone()),
            )?;
        }
        if scenario.outputs.wants(OutputFormat::Csv) {
            format::write_absorption_csv(
                &outdir.join(format!("absorption_{}.csv", point.label)),
                &map,
            )?;
        }
        if scenario.outputs.wants(OutputFormat::Ppm) {
            render::render_heatmap(
                &map.im_chi_r(),
                &scenario.grid,
                &outdir.join(format!("absorption_r_{}.ppm", point.label)),
                Palette::Viridis,
            )?;
            render::render_heatmap(
                &map.im_chi_l(),
                &scenario.grid,
                &outdir.join(format!("absorption_l_{}.ppm", point.label)),
                Palette::Viridis,
            )?;
        }
        analyze_ring(&map.im_chi_r(), &scenario, point, "im_chi_r", &mut window_reports);
        analyze_ring(&map.im_chi_l(), &scenario, point, "im_chi_l", &mut window_reports);
    }
    if scenario.outputs.wants(OutputFormat::Json) {
        write_json(&outdir.join("windows.json"), &window_reports)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct StokesSummary {
    z: f64,
    z_over_labs: Option<f64>,
    texture: String,
    defined_pixels: usize,
    linear_fraction: f64,
    mean_zeta: Option<f64>,
    mean_ellipticity_sine: Option<f64>,
    mean_s3: Option<f64>,
}

fn cmd_stokes(args: &ConfigArgs) -> Result<(), AppError> {
    let scenario = args.resolve()?;
    let outdir = prepare_outputs(&scenario)?;
    let texture = lambda_vortex::beam::texture_label(scenario.beam.psi());
    let mut summaries = Vec::new();
    for point in &scenario.z_points {
        let fields = grid::evaluate_field_map(
            &scenario.state,
            &scenario.medium,
            &scenario.beam,
            &scenario.grid,
            point.z,
        )?;
        let map = grid::evaluate_stokes_map(&fields);
        if scenario.outputs.wants(OutputFormat::Vvfm) {
            format::write_map(
                &outdir.join(format!("stokes_{}.vvfm", point.label)),
                &MapData::Stokes(map.clone()),
            )?;
        }
        if scenario.outputs.wants(OutputFormat::Csv) {
            format::write_stokes_csv(&outdir.join(format!("stokes_{}.csv", point.label)), &map)?;
        }
        if scenario.outputs.wants(OutputFormat::Svg) {
            render::render_stokes_glyphs(
                &map,
                &outdir.join(format!("stokes_glyphs_{}.svg", point.label)),
                scenario.outputs.glyph_lattice,
            )?;
        }
        if scenario.outputs.wants(OutputFormat::Ppm) {
            let zeta_plane: Vec<f64> = map
                .samples()
                .iter()
                .map(|s| s.zeta.unwrap_or(f64::NAN))
                .collect();
            render::render_heatmap(
                &zeta_plane,
                &scenario.grid,
                &outdir.join(format!("zeta_{}.ppm", point.label)),
                Palette::Viridis,
            )?;
        }
        let summary = StokesSummary {
            z: point.z,
            z_over_labs: point.over_labs,
            texture: texture.to_string(),
            defined_pixels: map.defined_count(),
            linear_fraction: map.linear_fraction(polarimetry::DEFAULT_CLASS_TOLERANCE),
            mean_zeta: map.mean_zeta(),
            mean_ellipticity_sine: map.mean_ellipticity_sine(),
            mean_s3: map.mean_s3(),
        };
        println!(
            "z label {}: texture {}, linear fraction {:.4}, mean zeta {:?}, mean S3 {:?}",
            point.label, texture, summary.linear_fraction, summary.mean_zeta, summary.mean_s3
        );
        summaries.push(summary);
    }
    if scenario.outputs.wants(OutputFormat::Json) {
        write_json(&outdir.join("stokes_summary.json"), &summaries)?;
    }
    Ok(())
}

fn cmd_zc_scan(
    args: &ConfigArgs,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
) -> Result<(), AppError> {
    if steps == 0 {
        return Err(ConfigError::Field {
            path: "steps".into(),
            message: "must be at least 1".into(),
        }
        .into());
    }
    if !(delta_min.is_finite() && delta_max.is_finite()) || delta_min > delta_max {
        return Err(ConfigError::Field {
            path: "delta_min/delta_max".into(),
            message: "scan bounds must be finite with delta_min <= delta_max".into(),
        }
        .into());
    }
    let scenario = args.resolve()?;
    let outdir = prepare_outputs(&scenario)?;
    let gamma = scenario.medium.transition_r().gamma();
    let deltas: Vec<f64> = if steps == 1 {
        vec![delta_min * gamma]
    } else {
        (0..steps)
            .map(|k| {
                let t = k as f64 / (steps - 1) as f64;
                (delta_min + t * (delta_max - delta_min)) * gamma
            })
            .collect()
    };
    let curve = bloch::zc_scan(&scenario.state, &scenario.medium, &deltas)?;

    let mut csv = String::from("delta_over_gamma,zc_over_labs\n");
    for p in &curve {
        csv.push_str(&format!(
            "{},{}\n",
            sig17(p.delta_over_gamma),
            p.zc_over_labs.map_or_else(|| "nan".into(), sig17)
        ));
    }
    std::fs::write(outdir.join("zc_scan.csv"), csv)?;

    if scenario.outputs.wants(OutputFormat::Svg) {
        let points: Vec<(f64, Option<f64>)> = curve
            .iter()
            .map(|p| (p.delta_over_gamma, p.zc_over_labs))
            .collect();
        render::render_curve_svg(
            &points,
            "delta / gamma",
            "z_c / L_abs",
            &outdir.join("zc_scan.svg"),
        )?;
    }

    let at_resonance = curve
        .iter()
        .min_by(|a, b| {
            a.delta_over_gamma
                .abs()
                .partial_cmp(&b.delta_over_gamma.abs())
                .unwrap()
        })
        .unwrap();
    println!(
        "scanned {} points in delta/gamma = [{delta_min}, {delta_max}]; nearest-resonance z_c/L_abs = {:?}",
        curve.len(),
        at_resonance.zc_over_labs
    );
    Ok(())
}

fn cmd_verify(args: &ConfigArgs, trials: Option<usize>, seed: Option<u64>) -> Result<(), AppError> {
    let scenario = args.resolve()?;
    let trials = trials.unwrap_or(scenario.verify.trials);
    let seed = seed.unwrap_or(scenario.verify.seed);
    if trials == 0 {
        return Err(ConfigError::Field {
            path: "verify.trials".into(),
            message: "must be at least 1".into(),
        }
        .into());
    }
    let outdir = prepare_outputs(&scenario)?;

    println!("verification seed = {seed}, trials = {trials}");
    let report = verify::run_all(seed, trials);
    for check in &report.checks {
        println!(
            "[{}] {}: max_error = {:.3e}, tolerance = {:.3e}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.max_error,
            check.tolerance
        );
    }
    if scenario.outputs.wants(OutputFormat::Json) {
        write_json(&outdir.join("verify_report.json"), &report)?;
    }
    if report.pass {
        println!("all checks passed");
        Ok(())
    } else {
        Err(AppError::VerificationFailed)
    }
}

fn cmd_paraxial_check(wavelength: f64, waist: f64, length: f64) -> Result<(), AppError> {
    let check = bloch::paraxial_check(wavelength, waist, length)?;
    println!(
        "L*lambda/w^2 = {:.6e} -> {}",
        check.ratio,
        if check.pass {
            "pass: diffraction negligible over the medium"
        } else {
            "fail: diffraction is not negligible"
        }
    );
    Ok(())
}
