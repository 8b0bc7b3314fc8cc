//! Acceptance suite: one test per release criterion, each printing a
//! single pass/fail line. Tolerances are pinned here, not configurable.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use lambda_vortex::beam::VortexBeamSpec;
use lambda_vortex::bloch::{
    self, FieldPair, MediumConfig, PreparedState, TransitionParams,
};
use lambda_vortex::format::{self, MapData};
use lambda_vortex::grid::{
    evaluate_absorption_map, evaluate_field_map, evaluate_stokes_map, ring_profile, GridSpec,
};
use lambda_vortex::polarimetry::{
    count_azimuthal_windows, petal_rotation_angle, RingFeature,
};
use lambda_vortex::verify;
use lambda_vortex::C64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::time::Instant;

const RING_SAMPLES: usize = 720;

fn criterion(name: &str, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(detail) => println!("[PASS] {name}: {detail}"),
        Err(msg) => {
            println!("[FAIL] {name}: {msg}");
            panic!("{name}: {msg}");
        }
    }
}

fn balanced_resonant() -> (PreparedState, MediumConfig) {
    (
        PreparedState::balanced(),
        MediumConfig::symmetric(20.0, 1.0, 0.0, 1.0).unwrap(),
    )
}

fn beam(l: i32, theta: f64, psi: f64) -> VortexBeamSpec {
    VortexBeamSpec::new(l, 1.0, theta, psi, 0.05).unwrap()
}

#[test]
fn criterion_1_oracle_equivalence() {
    criterion("criterion 1: oracle equivalence (100 seeded trials)", || {
        let start = Instant::now();
        let check = verify::oracle_equivalence(42, 100);
        let elapsed = start.elapsed();
        if check.max_error > 1e-8 {
            return Err(format!("max relative deviation {} > 1e-8", check.max_error));
        }
        if elapsed.as_secs_f64() >= 5.0 {
            return Err(format!("runtime {:.2}s exceeds 5s", elapsed.as_secs_f64()));
        }
        Ok(format!(
            "max relative deviation {:.3e} in {:.0} ms",
            check.max_error,
            elapsed.as_secs_f64() * 1e3
        ))
    });
}

#[test]
fn criterion_2_resonant_characteristic_distance() {
    criterion("criterion 2: characteristic distance vs detuning", || {
        let state = PreparedState::balanced();
        for alpha in [5.0, 20.0, 41.0] {
            let medium = MediumConfig::symmetric(alpha, 1.0, 0.0, 1.0).unwrap();
            let l_abs = medium.absorption_length();
            let zc = bloch::characteristic_distance(&state, &medium)
                .map_err(|e| e.to_string())?;
            let rel = (zc / l_abs - 1.0).abs();
            if rel > 1e-14 {
                return Err(format!("alpha={alpha}: z_c/L_abs off by {rel}"));
            }
        }

        let medium = MediumConfig::symmetric(20.0, 1.0, 0.0, 1.0).unwrap();
        let l_abs = medium.absorption_length();
        let mut worst: f64 = 0.0;
        for k in 0..61 {
            let delta = -3.0 + 6.0 * k as f64 / 60.0;
            let detuned = MediumConfig::symmetric(20.0, 1.0, delta, 1.0).unwrap();
            let zc = bloch::characteristic_distance(&state, &detuned)
                .map_err(|e| e.to_string())?;
            let expect = 1.0 + delta * delta;
            worst = worst.max((zc / l_abs - expect).abs() / expect);
        }
        if worst > 1e-12 {
            return Err(format!("parabola deviation {worst} > 1e-12"));
        }
        Ok(format!("61-point parabola max relative deviation {worst:.3e}"))
    });
}

#[test]
fn criterion_3_asymptotics_and_extinction() {
    criterion("criterion 3: asymptotic fields and extinction", || {
        let medium = MediumConfig::symmetric(20.0, 1.0, 0.0, 1.0).unwrap();
        let z = 50.0 * medium.absorption_length();
        for (m, phase) in [(0.7071067811865476, 0.0), (0.3, 1.2), (0.9, 4.0)] {
            let state = PreparedState::new(m, phase).unwrap();
            let input = FieldPair::new(C64::new(0.6, -0.3), C64::new(-0.4, 0.8));
            let far = bloch::propagate(&state, &medium, &input, z);
            let limit = bloch::asymptotic_fields(&state, &input);
            let scale = input.max_norm();
            let dev = (far.omega_r - limit.omega_r)
                .norm()
                .max((far.omega_l - limit.omega_l).norm());
            if dev > 1e-10 * scale {
                return Err(format!("asymptotic deviation {dev:.3e} at m={m}"));
            }
        }

        let state = PreparedState::balanced();
        let matched = FieldPair::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0));
        let out = bloch::propagate(&state, &medium, &matched, z);
        let residual = out.omega_r.norm().max(out.omega_l.norm());
        if residual > 1e-10 {
            return Err(format!("extinction residual {residual:.3e} > 1e-10"));
        }
        Ok(format!("extinction residual {residual:.3e}"))
    });
}

fn window_count_on_grid(
    state: &PreparedState,
    medium: &MediumConfig,
    beam_spec: &VortexBeamSpec,
    n: usize,
    z: f64,
) -> Result<usize, String> {
    let grid = GridSpec::new(n, 3.0).unwrap();
    let map = evaluate_absorption_map(state, medium, beam_spec, &grid, z)
        .map_err(|e| e.to_string())?;
    let profile = ring_profile(
        &map.im_chi_r(),
        &grid,
        beam_spec.waist(),
        beam_spec.waist(),
        RING_SAMPLES,
    );
    let windows = count_azimuthal_windows(&profile, 0.5, RingFeature::Below)
        .map_err(|e| e.to_string())?;
    Ok(windows.count)
}

#[test]
fn criterion_4_topology_imprinting() {
    criterion("criterion 4: 2|l| transparency windows", || {
        let (state, medium) = balanced_resonant();
        let l_abs = medium.absorption_length();
        let start = Instant::now();
        for l in 1..=4i32 {
            let spec = beam(l, FRAC_PI_4, 0.0);
            for z_over in [0.0, 0.5, 1.0] {
                for n in [256usize, 512] {
                    let count =
                        window_count_on_grid(&state, &medium, &spec, n, z_over * l_abs)?;
                    if count != 2 * l as usize {
                        return Err(format!(
                            "l={l}, z/L_abs={z_over}, n={n}: {count} windows, expected {}",
                            2 * l
                        ));
                    }
                }
            }
        }
        let spec = beam(2, FRAC_PI_4, 0.0);
        for n in [256usize, 512] {
            let count = window_count_on_grid(&state, &medium, &spec, n, 20.0 * l_abs)?;
            if count != 4 {
                return Err(format!(
                    "l=2, z/L_abs=20, n={n}: {count} windows, expected 4"
                ));
            }
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 30.0 {
            return Err(format!("runtime {:.2}s exceeds 30s", elapsed.as_secs_f64()));
        }
        Ok(format!(
            "counts 2|l| for l=1..4 at z/L_abs in {{0, 0.5, 1}} and l=2 at 20, n in {{256, 512}}, in {:.1} s",
            elapsed.as_secs_f64()
        ))
    });
}

#[test]
fn criterion_5_petal_rotation() {
    criterion("criterion 5: petal rotation by psi/2", || {
        let (state, medium) = balanced_resonant();
        let z = medium.absorption_length();
        let grid = GridSpec::new(512, 3.0).unwrap();
        let centers = |psi: f64| -> Result<Vec<f64>, String> {
            let spec = beam(1, FRAC_PI_4, psi);
            let map = evaluate_field_map(&state, &medium, &spec, &grid, z)
                .map_err(|e| e.to_string())?;
            let profile = ring_profile(&map.intensity_total(), &grid, 1.0, 1.0, RING_SAMPLES);
            let petals = count_azimuthal_windows(&profile, 0.5, RingFeature::Above)
                .map_err(|e| e.to_string())?;
            if petals.count != 2 {
                return Err(format!("psi={psi}: {} petals, expected 2", petals.count));
            }
            Ok(petals.centers)
        };
        let at_zero = centers(0.0)?;
        let at_pi = centers(PI)?;
        let rotation = petal_rotation_angle(&at_pi, &at_zero).map_err(|e| e.to_string())?;
        let bin = 2.0 * PI / RING_SAMPLES as f64;
        let deviation = (rotation.abs() - FRAC_PI_2).abs();
        if deviation > bin {
            return Err(format!(
                "|rotation| = {:.6} differs from pi/2 by {:.2e} (> one bin {:.2e})",
                rotation.abs(),
                deviation,
                bin
            ));
        }
        Ok(format!(
            "|rotation| = {:.6} rad, within {:.2e} of pi/2",
            rotation.abs(),
            deviation
        ))
    });
}

#[test]
fn criterion_6_polarization_scenarios() {
    criterion("criterion 6: polarization texture evolution", || {
        let grid = GridSpec::new(256, 3.0).unwrap();
        let (balanced, medium) = balanced_resonant();
        let l_abs = medium.absorption_length();

        // (a) Equal amplitudes stay linear at every defined pixel for all
        // three textures.
        for psi in [0.0, FRAC_PI_2, PI] {
            let spec = beam(1, FRAC_PI_4, psi);
            for z_over in [1.0, 10.0, 30.0] {
                let fields =
                    evaluate_field_map(&balanced, &medium, &spec, &grid, z_over * l_abs)
                        .map_err(|e| e.to_string())?;
                let map = evaluate_stokes_map(&fields);
                let fraction = map.linear_fraction(0.02);
                if fraction < 1.0 {
                    return Err(format!(
                        "(a) psi={psi}, z/L_abs={z_over}: linear fraction {fraction} < 1"
                    ));
                }
            }
        }

        // (b) Left-dominant input starts well toward left-circular and
        // settles to linear.
        let spec = beam(1, FRAC_PI_8, 0.0);
        let entrance = evaluate_field_map(&balanced, &medium, &spec, &grid, 0.0)
            .map_err(|e| e.to_string())?;
        let entrance_sine = evaluate_stokes_map(&entrance)
            .mean_ellipticity_sine()
            .ok_or("(b) no defined pixels at z=0")?;
        if entrance_sine > -0.5 {
            return Err(format!("(b) mean S3/S0 at z=0 is {entrance_sine}, expected <= -0.5"));
        }
        let deep = evaluate_field_map(&balanced, &medium, &spec, &grid, 30.0 * l_abs)
            .map_err(|e| e.to_string())?;
        let deep_zeta = evaluate_stokes_map(&deep)
            .mean_zeta()
            .ok_or("(b) no defined pixels at z=30 L_abs")?;
        if deep_zeta.abs() >= 0.02 {
            return Err(format!("(b) |mean zeta| = {} at z=30 L_abs", deep_zeta.abs()));
        }

        // (c) Unequal populations flip the handedness sign.
        let lopsided = PreparedState::new(0.5, 0.0).unwrap();
        let entrance = evaluate_field_map(&lopsided, &medium, &spec, &grid, 0.0)
            .map_err(|e| e.to_string())?;
        let s3_in = evaluate_stokes_map(&entrance)
            .mean_s3()
            .ok_or("(c) no defined pixels at z=0")?;
        let deep = evaluate_field_map(&lopsided, &medium, &spec, &grid, 30.0 * l_abs)
            .map_err(|e| e.to_string())?;
        let s3_out = evaluate_stokes_map(&deep)
            .mean_s3()
            .ok_or("(c) no defined pixels at z=30 L_abs")?;
        if !(s3_in < 0.0 && s3_out > 0.0) {
            return Err(format!(
                "(c) mean S3 went {s3_in:.3e} -> {s3_out:.3e}, expected negative -> positive"
            ));
        }
        Ok(format!(
            "(a) all-linear; (b) sine {entrance_sine:.3} -> |zeta| {:.1e}; (c) S3 {s3_in:.2e} -> {s3_out:.2e}",
            deep_zeta.abs()
        ))
    });
}

#[test]
fn criterion_7_property_suites() {
    criterion("criterion 7: property suites", || {
        // Pointwise Stokes closure on a generated map with mixed textures.
        let state = PreparedState::new(0.6, 0.7).unwrap();
        let medium = MediumConfig::new(
            TransitionParams::new(20.0, 1.0, 0.5).unwrap(),
            TransitionParams::new(14.0, 1.0, -1.0).unwrap(),
            1.0,
        )
        .unwrap();
        let spec = beam(2, 0.9, 2.0);
        let grid = GridSpec::new(128, 3.0).unwrap();
        for z in [0.0, 0.05, 0.4] {
            let fields = evaluate_field_map(&state, &medium, &spec, &grid, z)
                .map_err(|e| e.to_string())?;
            let map = evaluate_stokes_map(&fields);
            for s in map.samples() {
                if s.s0 > 0.0 {
                    let lhs = s.s0 * s.s0;
                    let rhs = s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3;
                    if (lhs - rhs).abs() > 1e-12 * lhs {
                        return Err(format!(
                            "stokes closure violated by {:.3e} at z={z}",
                            (lhs - rhs).abs() / lhs
                        ));
                    }
                }
            }
        }

        for check in [
            verify::dark_state_transparency(42, 100),
            verify::resonant_contractivity(42, 100),
            verify::stokes_identity(42, 100),
            verify::oracle_linearity(42, 100),
            verify::oracle_semigroup(42, 100),
        ] {
            if !check.pass {
                return Err(format!(
                    "{}: max error {:.3e} > tolerance {:.1e}",
                    check.name, check.max_error, check.tolerance
                ));
            }
        }
        Ok("stokes closure, dark state, contractivity, linearity, semigroup all in tolerance"
            .to_string())
    });
}

#[test]
fn criterion_8_round_trip_and_determinism() {
    criterion("criterion 8: VVFM round-trip and determinism", || {
        let (state, medium) = balanced_resonant();
        let spec = beam(2, 0.8, 1.1);
        let grid = GridSpec::new(128, 3.0).unwrap();
        let z = 0.35;

        let field = evaluate_field_map(&state, &medium, &spec, &grid, z)
            .map_err(|e| e.to_string())?;
        let absorption = evaluate_absorption_map(&state, &medium, &spec, &grid, z)
            .map_err(|e| e.to_string())?;
        let stokes = evaluate_stokes_map(&field);

        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        for (name, map) in [
            ("field", MapData::Field(field.clone())),
            ("absorption", MapData::Absorption(absorption)),
            ("stokes", MapData::Stokes(stokes)),
        ] {
            let bytes = format::to_bytes(&map);
            let path = dir.path().join(format!("{name}.vvfm"));
            format::write_map(&path, &map).map_err(|e| e.to_string())?;
            let on_disk = std::fs::read(&path).map_err(|e| e.to_string())?;
            if on_disk != bytes {
                return Err(format!("{name}: file bytes differ from serialization"));
            }
            let reread = format::read_map(&path).map_err(|e| e.to_string())?;
            if format::to_bytes(&reread) != bytes {
                return Err(format!("{name}: round-trip is not bit-exact"));
            }
        }

        let reference = format::to_bytes(&MapData::Field(field));
        for workers in [1usize, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| e.to_string())?;
            let map = pool
                .install(|| evaluate_field_map(&state, &medium, &spec, &grid, z))
                .map_err(|e| e.to_string())?;
            if format::to_bytes(&MapData::Field(map)) != reference {
                return Err(format!("evaluation differs with {workers} workers"));
            }
        }
        Ok("bit-exact round-trips; identical bytes for 1/3/8 workers".to_string())
    });
}
