//! Acceptance suite: one test per shipping criterion, each printing a single
//! PASS line with the measured numbers (visible under `--nocapture`; a failed
//! assert marks the criterion FAILED in the test summary).
//!
//! Run with: cargo test --test acceptance -- --nocapture

use std::sync::OnceLock;
use std::time::Instant;

use rindler_cavity::{
    compose, compute_coefficients, galilean_coefficients, h_parameter, inertial_mode, inverse,
    kg_inner_product, rindler_mode, wedge_from_h, BogoliubovPair, Cavity, MetricTensor,
    ModeFunction, QuadratureConfig, RindlerChart, Surface, WedgeCavity,
};
use rindler_cavity_cli::{compare, log_log_slope, run, Medium, ScenarioConfig, Sweep};

const SPEED_OF_LIGHT: f64 = 3.0e8;

/// The reference computation shared by criteria 2 and 7: h = 0.1, cutoff 30,
/// tol 1e-10, plus the wall-clock seconds it took.
fn reference_pair() -> &'static (BogoliubovPair, f64) {
    static PAIR: OnceLock<(BogoliubovPair, f64)> = OnceLock::new();
    PAIR.get_or_init(|| {
        let wedge = wedge_from_h(0.1, 1.0).unwrap();
        let cavity = Cavity::new(wedge.chi_l, wedge.chi_r, 1.0).unwrap();
        let started = Instant::now();
        let pair = compute_coefficients(&cavity, 0.1, 30, 1e-10).unwrap();
        (pair, started.elapsed().as_secs_f64())
    })
}

fn scenario(medium: Medium, a: f64, length: f64, c: f64, cutoff: usize) -> ScenarioConfig {
    ScenarioConfig {
        medium,
        a,
        length,
        c: Some(c),
        background: None,
        cutoff,
        tol: 1e-10,
        sweep: None,
        out: None,
    }
}

#[test]
fn criterion_1_optical_acceleration_anchor() {
    // A tabletop optical cavity: h = 0.1 across L = 1 micron.
    let (h, length) = (0.1, 1.0e-6);
    let a = h * SPEED_OF_LIGHT * SPEED_OF_LIGHT / length;
    assert!((a - 9.0e21).abs() / 9.0e21 < 1e-12, "a = {a:e}");

    // Within a factor of two of the 1e22 m/s^2 scale.
    let ratio = a / 1.0e22;
    assert!((0.5..=2.0).contains(&ratio), "ratio = {ratio}");

    // And the dimensionless parameter reconstructs from it.
    let h_back = h_parameter(a, length, SPEED_OF_LIGHT).unwrap();
    assert!((h_back - h).abs() < 1e-12);

    println!("ACCEPTANCE 1 optical-acceleration-anchor: PASS (a = {a:.3e} m/s^2, {ratio:.2}x the 1e22 scale)");
}

#[test]
fn criterion_2_canonical_identities() {
    let (pair, seconds) = reference_pair();
    assert!(
        pair.trusted_block >= 10,
        "trusted block = {}",
        pair.trusted_block
    );
    let canonical = pair.canonical_residual(10);
    let symmetry = pair.symmetry_residual(10);
    assert!(canonical < 1e-6, "canonical residual = {canonical:e}");
    assert!(symmetry < 1e-6, "symmetry residual = {symmetry:e}");
    assert!(*seconds < 120.0, "took {seconds} s");

    println!(
        "ACCEPTANCE 2 canonical-identities: PASS (canonical {canonical:.2e}, symmetry {symmetry:.2e}, {seconds:.2} s)"
    );
}

#[test]
fn criterion_3_photon_phonon_equivalence() {
    // Identical h = 0.1 from a laser cavity and from a cold-atom cloud; the
    // grid is pinned so both sides see bitwise the same h.
    let started = Instant::now();
    let mut photon = scenario(Medium::Photon, 9.0e21, 1.0e-6, SPEED_OF_LIGHT, 30);
    photon.sweep = Some(Sweep::List(vec![0.1]));
    let mut phonon = scenario(Medium::Phonon, 1.0e-3, 1.0e-4, 1.0e-3, 30);
    phonon.sweep = Some(Sweep::List(vec![0.1]));

    let report = compare(&photon, &phonon).unwrap();
    assert!(report.h_matched);
    assert!(
        report.max_alpha_diff < 1e-10,
        "alpha gap = {:e}",
        report.max_alpha_diff
    );
    assert!(
        report.max_beta_diff < 1e-10,
        "beta gap = {:e}",
        report.max_beta_diff
    );
    let seconds = started.elapsed().as_secs_f64();
    assert!(seconds < 240.0, "took {seconds} s");

    println!(
        "ACCEPTANCE 3 photon-phonon-equivalence: PASS (alpha gap {:.2e}, beta gap {:.2e}, {seconds:.2} s)",
        report.max_alpha_diff, report.max_beta_diff
    );
}

#[test]
fn criterion_4_quadratic_law_and_galilean_zero() {
    let started = Instant::now();
    let mut config = scenario(Medium::Photon, 9.0e21, 1.0e-6, SPEED_OF_LIGHT, 20);
    config.sweep = Some(Sweep::LogRange {
        lo: 1e-3,
        hi: 1e-2,
        n: 5,
    });
    let result = run(&config).unwrap();
    let slope = result.slope.expect("five positive totals");
    assert!((slope - 2.0).abs() < 0.05, "slope = {slope}");

    let (_, galilean_total) = galilean_coefficients(20).unwrap().particle_number();
    assert_eq!(galilean_total, 0.0, "the identity map creates particles?");
    let seconds = started.elapsed().as_secs_f64();
    assert!(seconds < 600.0, "took {seconds} s");

    println!(
        "ACCEPTANCE 4 quadratic-law-and-galilean-zero: PASS (slope {slope:.4}, galilean total = {galilean_total}, {seconds:.2} s)"
    );
}

#[test]
fn criterion_5_expansion_residual_orders() {
    let chart = RindlerChart::new(SPEED_OF_LIGHT).unwrap();
    let accel = 9.8;
    let epsilons: Vec<f64> = (0..9)
        .map(|i| 1e-3 * 100f64.powf(i as f64 / 8.0))
        .collect();

    let mut dt_points = Vec::new();
    let mut dx_points = Vec::new();
    for &eps in &epsilons {
        let tau = eps * SPEED_OF_LIGHT / accel;
        let (dt, dx) = chart.expansion_residual(tau, accel).unwrap();
        dt_points.push((eps, dt.abs()));
        dx_points.push((eps, dx.abs()));
    }
    let slope_dt = log_log_slope(&dt_points).unwrap();
    let slope_dx = log_log_slope(&dx_points).unwrap();
    assert!((slope_dt - 3.0).abs() < 0.05, "time slope = {slope_dt}");
    assert!((slope_dx - 4.0).abs() < 0.05, "position slope = {slope_dx}");

    println!(
        "ACCEPTANCE 5 expansion-residual-orders: PASS (time slope {slope_dt:.4}, position slope {slope_dx:.4})"
    );
}

#[test]
fn criterion_6_mode_basis_health() {
    let cfg = QuadratureConfig::with_tol(1e-11);
    let cavity = Cavity::new(0.5, 1.5, 1.0).unwrap();
    let wedge = WedgeCavity::new(0.5, 1.5).unwrap();

    let mut worst = 0.0f64;
    for n in 1..=10 {
        for m in 1..=10 {
            let pairs = [
                (
                    ModeFunction::inertial(cavity, n).unwrap(),
                    ModeFunction::inertial(cavity, m).unwrap(),
                ),
                (
                    ModeFunction::rindler(wedge, n).unwrap(),
                    ModeFunction::rindler(wedge, m).unwrap(),
                ),
            ];
            for (a, b) in pairs {
                let product = kg_inner_product(&a, &b, Surface::InitialTime, &cfg).unwrap();
                let expected = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((product.value - expected).norm());
            }
        }
    }
    assert!(worst < 1e-10, "worst Gram deviation = {worst:e}");

    // Second-order convergence of the discrete wave operator on a true mode.
    let metric = MetricTensor::flat(1.0).unwrap();
    let field = |t: f64, x: f64| inertial_mode(&cavity, 2, t, x).unwrap().0;
    let steps = [4e-3, 2e-3, 1e-3, 5e-4];
    let points: Vec<(f64, f64)> = steps
        .iter()
        .map(|&s| {
            let r =
                rindler_cavity::wave_equation_residual(field, &metric, &cavity, 0.3, 0.9, s)
                    .unwrap();
            (s, r)
        })
        .collect();
    let slope = log_log_slope(&points).unwrap();
    assert!((slope - 2.0).abs() < 0.1, "stencil slope = {slope}");

    println!(
        "ACCEPTANCE 6 mode-basis-health: PASS (Gram deviation {worst:.2e}, stencil slope {slope:.4})"
    );
}

#[test]
fn criterion_7_round_trip_algebra() {
    let (pair, _) = reference_pair();
    let inv = inverse(pair).unwrap();
    let round = compose(pair, &inv).unwrap();

    // Deviation from the identity transformation over the 10x10 block that
    // criterion 2 certifies.
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((round.alpha[(i, j)] - delta).norm());
            worst = worst.max(round.beta[(i, j)].norm());
        }
    }
    assert!(worst < 1e-8, "round-trip deviation = {worst:e}");

    println!("ACCEPTANCE 7 round-trip-algebra: PASS (identity deviation {worst:.2e})");
}

// Check once that rindler_mode stays linked into this suite: criterion 6
// exercises the accelerated basis through ModeFunction, and this smoke check
// pins the free-function form of the same mode at the matching slice.
#[test]
fn accelerated_mode_free_function_agrees_with_mode_object() {
    let wedge = WedgeCavity::new(0.5, 1.5).unwrap();
    let mode = ModeFunction::rindler(wedge, 3).unwrap();
    let chi = 0.9;
    let (value, _, _) = rindler_mode(&wedge, 3, 0.0, chi).unwrap();
    let object_value = mode.value(0.0, chi).unwrap();
    assert!((value - object_value).norm() < 1e-15);
}
