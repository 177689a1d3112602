//! Statistical soundness of the Monte Carlo density estimator.

use lattice_covering::density::{estimate_uncovered_density, ProductBody};
use lattice_covering::lattice::Lattice;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::PI;

#[test]
fn estimator_is_unbiased_with_binomial_variance() {
    // 50 independent estimates of the uncovered density of Z^2 + B_(1/2):
    // the mean must sit within 4 standard errors of 1 - pi/4 and the spread
    // must be consistent with binomial sampling noise.
    let lat = Lattice::integer(2);
    let body = ProductBody::single_ball(2, 0.5);
    let runs = 50usize;
    let samples = 10_000usize;
    let p = 1.0 - PI / 4.0;

    let estimates: Vec<f64> = (0..runs)
        .map(|i| {
            estimate_uncovered_density(&lat, &body, samples, 1000 + i as u64)
                .unwrap()
                .estimate
        })
        .collect();

    let mean = estimates.iter().sum::<f64>() / runs as f64;
    let se = (p * (1.0 - p) / samples as f64 / runs as f64).sqrt();
    assert!(
        (mean - p).abs() <= 4.0 * se,
        "mean {mean} vs {p} (se {se})"
    );

    // Chi-square test of the sample variance against the binomial variance.
    let sigma_sq = p * (1.0 - p) / samples as f64;
    let sample_var = estimates
        .iter()
        .map(|e| (e - mean) * (e - mean))
        .sum::<f64>()
        / (runs as f64 - 1.0);
    let stat = (runs as f64 - 1.0) * sample_var / sigma_sq;
    let chi = ChiSquared::new(runs as f64 - 1.0).unwrap();
    let cdf = chi.cdf(stat);
    let p_two_sided = 2.0 * cdf.min(1.0 - cdf);
    assert!(
        p_two_sided > 0.001,
        "variance inconsistent with binomial: stat {stat}, p {p_two_sided}"
    );
}

#[test]
fn rule_of_three_on_zero_misses() {
    let lat = Lattice::integer(1);
    let body = ProductBody::single_ball(1, 0.75);
    let est = estimate_uncovered_density(&lat, &body, 50_000, 2).unwrap();
    assert_eq!(est.estimate, 0.0);
    assert_eq!(est.method, "rule-of-three");
    assert!((est.ci_upper() - 3.0 / 50_000.0).abs() < 1e-15);
}

#[test]
fn hex_near_covering_radius_densities() {
    // Slightly below the covering radius some mass is uncovered; slightly
    // above, none.
    let hex = lattice_covering::lattice::hex_lattice();
    let r_cov = 1.0 / 3.0f64.sqrt();
    let below = estimate_uncovered_density(&hex, &ProductBody::single_ball(2, 0.97 * r_cov), 100_000, 5)
        .unwrap();
    assert!(below.estimate > 0.0);
    let above = estimate_uncovered_density(&hex, &ProductBody::single_ball(2, 1.01 * r_cov), 100_000, 5)
        .unwrap();
    assert_eq!(above.estimate, 0.0);
}
