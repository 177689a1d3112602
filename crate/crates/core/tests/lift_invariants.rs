//! Invariants of the lifting machinery: determinant block structure,
//! linearity of the translation map, statistics of random translations, and
//! the direct-product degenerate case.

use lattice_covering::density::{estimate_uncovered_density, ProductBody};
use lattice_covering::lattice::{hex_lattice, Lattice};
use lattice_covering::lemmas;
use lattice_covering::lift::{
    expand_body, lift_until_good, pipeline, random_lift, random_translation_mean, LiftOptions,
    LiftedLattice, PipelineConfig, RobustCovering, TranslationMap,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dv(vals: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(vals)
}

#[test]
fn determinant_invariance_over_many_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let robusts = [
        RobustCovering::from_name("cube(1)").unwrap(),
        RobustCovering::from_name("hex").unwrap(),
    ];
    let mut checked = 0;
    while checked < 100 {
        let entries: Vec<f64> = (0..4).map(|_| 3.0 * rng.random::<f64>() - 1.5).collect();
        let m = DMatrix::from_row_slice(2, 2, &entries);
        if m.determinant().abs() < 0.3 {
            continue;
        }
        let base = Lattice::from_basis(m).unwrap();
        let robust = &robusts[checked % 2];
        let body = ProductBody::single_ball(2, 0.5);
        let lift = random_lift(&base, robust, &body, checked as u64).unwrap();
        let expect = base.det_abs() * robust.lattice.det_abs();
        assert!(
            (lift.lifted.det_abs() - expect).abs() <= 1e-9 * expect,
            "det {} vs {}",
            lift.lifted.det_abs(),
            expect
        );
        checked += 1;
    }
}

#[test]
fn translation_map_is_linear() {
    let hex = hex_lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let ys = vec![dv(&[0.3, 0.1, 0.9]), dv(&[0.2, 0.8, 0.4])];
    let phi = TranslationMap::new(hex.basis(), ys).unwrap();
    for _ in 0..50 {
        let c1 = [rng.random_range(-4..5), rng.random_range(-4..5)];
        let c2 = [rng.random_range(-4..5), rng.random_range(-4..5)];
        let z1 = hex.point_from_coeffs(&c1).unwrap().coords;
        let z2 = hex.point_from_coeffs(&c2).unwrap().coords;
        let lhs = phi.apply(&(&z1 + &z2)).unwrap();
        let rhs = phi.apply(&z1).unwrap() + phi.apply(&z2).unwrap();
        assert!((lhs - rhs).amax() < 1e-9);
    }
}

#[test]
fn torus_map_grid_and_uniformity() {
    let check = lemmas::check_torus_map_exactness(100_000, 5).unwrap();
    assert!(check.passed, "{}", check.detail);
}

#[test]
fn random_translation_squares_disk_and_interval() {
    // Smaller budget than the acceptance run, same statistics.
    let disk = ProductBody::single_ball(2, 0.5);
    let out = random_translation_mean(&disk, 100, 10_000, 2).unwrap();
    let delta = 1.0 - std::f64::consts::PI / 4.0;
    assert!(
        (out.mean - delta * delta).abs() <= 3.0 * out.std_error,
        "mean {} vs {} (se {})",
        out.mean,
        delta * delta,
        out.std_error
    );

    let interval = ProductBody::single_ball(1, 0.25);
    let out = random_translation_mean(&interval, 100, 10_000, 2).unwrap();
    assert!(
        (out.mean - 0.25).abs() <= 3.0 * out.std_error,
        "mean {} vs 0.25 (se {})",
        out.mean,
        out.std_error
    );

    // A covering body stays covered under any translation.
    let covering = ProductBody::single_ball(2, 1.001 * 2.0f64.sqrt() / 2.0);
    let out = random_translation_mean(&covering, 20, 5_000, 1).unwrap();
    assert_eq!(out.mean, 0.0);
}

#[test]
fn zero_translation_lift_reproduces_base_density() {
    // With ys = 0 the lift is a direct product and the robust block covers
    // its factor, so the uncovered density matches the base pair's.
    let base = Lattice::integer(2);
    let robust = RobustCovering::from_name("hex").unwrap();
    let ys = vec![DVector::zeros(2), DVector::zeros(2)];
    let lift = LiftedLattice::with_translations(&base, &robust, ys).unwrap();
    let base_body = ProductBody::single_ball(2, 0.5);
    let lifted_body = base_body.product_with_ball(2, robust.radius);

    let est4 = estimate_uncovered_density(&lift.lifted, &lifted_body, 150_000, 3).unwrap();
    let est2 = estimate_uncovered_density(&base, &base_body, 150_000, 4).unwrap();
    let tol = 3.0 * (est4.ci95_halfwidth + est2.ci95_halfwidth);
    assert!(
        (est4.estimate - est2.estimate).abs() <= tol,
        "{} vs {} (tol {tol})",
        est4.estimate,
        est2.estimate
    );
}

#[test]
fn accepted_lifts_improve_strictly() {
    let base = Lattice::integer(1);
    let robust = RobustCovering::from_name("cube(1)").unwrap();
    let body = ProductBody::single_ball(1, 0.45);
    let opts = LiftOptions {
        samples: 100_000,
        tau: 3.0,
        ..Default::default()
    };
    let out = lift_until_good(&base, &robust, &body, 0.1, 2, 30, &opts).unwrap();
    assert!(out.estimate.ci_upper() < 0.1);
}

#[test]
fn per_event_mode_accepts_on_interval() {
    let base = Lattice::integer(1);
    let robust = RobustCovering::from_name("cube(1)").unwrap();
    let body = ProductBody::single_ball(1, 0.45);
    let opts = LiftOptions {
        samples: 50_000,
        tau: 3.0,
        per_event: true,
        ..Default::default()
    };
    let out = lift_until_good(&base, &robust, &body, 0.1, 4, 40, &opts).unwrap();
    assert!(out.estimate.ci_upper() <= out.threshold);
}

#[test]
fn paper_constants_threshold_is_looser() {
    // The analytic per-lift constant dwarfs any empirical tau, so acceptance
    // happens immediately once the estimate is finite.
    let base = Lattice::integer(1);
    let robust = RobustCovering::from_name("cube(1)").unwrap();
    let body = ProductBody::single_ball(1, 0.45);
    let opts = LiftOptions {
        samples: 20_000,
        paper_constants: true,
        ..Default::default()
    };
    let out = lift_until_good(&base, &robust, &body, 0.1, 5, 5, &opts).unwrap();
    assert_eq!(out.tries, 1);
    // c_lift(1) = 26, so the threshold is 26 * 0.01.
    assert!((out.threshold - 0.26).abs() < 1e-12);
}

#[test]
fn expansion_composes_multiplicatively() {
    let body = ProductBody::single_ball(2, 0.5);
    let (once, thr2) = expand_body(&body, 2).unwrap();
    let (twice, _) = expand_body(&once, 2).unwrap();
    assert!((once.scale - 1.5).abs() < 1e-15);
    assert!((twice.scale - 2.25).abs() < 1e-15);
    assert!((thr2 - 0.2).abs() < 1e-15);
}

#[test]
fn pipeline_degenerate_no_lifts() {
    // k = 0: the pipeline is expansion plus verification only.
    let cfg = PipelineConfig {
        initial: Some((Lattice::integer(2), ProductBody::single_ball(2, 0.68))),
        samples: 50_000,
        seed: 8,
        ..PipelineConfig::new(2, 1, 0, "cube(1)")
    };
    let result = pipeline(&cfg).unwrap();
    assert_eq!(result.stages.len(), 1);
    assert!(result.coverage_check.all_covered);
    // Expanded radius 0.68 * 1.5 covers Z^2 (covering radius sqrt(2)/2).
    assert!((result.final_body.scale - 1.5).abs() < 1e-12);
}

#[test]
fn pipeline_rejects_bad_dimensions() {
    let cfg = PipelineConfig::new(2, 2, 1, "hex");
    assert!(pipeline(&cfg).is_err());

    let cfg = PipelineConfig::new(4, 2, 1, "cube(1)");
    assert!(pipeline(&cfg).is_err());
}
