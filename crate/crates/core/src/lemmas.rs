//! Bundled self-checks for the constructive building blocks: combinatorial
//! count bounds, the squaring effect of random translations, exactness and
//! uniformity of unimodular torus maps, and the product-body containment.
//! The CLI exposes them as `check-lemmas`; the test suite reuses them.

use crate::constants::{ball_volume_sqrt_d, lift_constants, product_volume};
use crate::density::ProductBody;
use crate::error::Result;
use crate::lattice::{hex_lattice, Lattice};
use crate::lift::{integer_det, random_translation_mean, unimodular_torus_map};
use crate::robust::enumerate_fundamental_parallelepipeds;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl LemmaCheck {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        LemmaCheck {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Anchored-parallelepiped counts at the doubled radius stay under the
/// analytic bound (4^d d^(d/2) + 1)^(d 2^d) on the built-in robust coverings.
pub fn check_parallelepiped_count_bound() -> Result<LemmaCheck> {
    let mut detail = String::new();
    let mut passed = true;
    let fixtures: Vec<(&str, Lattice, f64)> = vec![
        ("cube(1)", Lattice::integer(1), 1.0),
        ("hex", hex_lattice(), 2.0 / 3.0f64.sqrt()),
        ("cube(2)", Lattice::integer(2), 2.0f64.sqrt()),
    ];
    for (name, lat, r) in fixtures {
        let d = lat.dim();
        let count = enumerate_fundamental_parallelepipeds(&lat, 2.0 * r)?.len();
        let bound = lift_constants(d)?.c_points;
        let ok = (count as f64) <= bound;
        passed &= ok;
        detail.push_str(&format!("{name}: {count} <= {bound:.3e}; "));
    }
    Ok(LemmaCheck::new("parallelepiped-count-bound", passed, detail))
}

/// Lattice point counts in the doubled ball stay under C^d with
/// C = 4^d d^(d/2) + 1 on the built-in robust coverings; the hexagonal count
/// is pinned to its derived value 19.
pub fn check_point_count_bound() -> Result<LemmaCheck> {
    let mut detail = String::new();
    let mut passed = true;
    let fixtures: Vec<(&str, Lattice, f64)> = vec![
        ("cube(1)", Lattice::integer(1), 1.0),
        ("hex", hex_lattice(), 2.0 / 3.0f64.sqrt()),
        ("cube(2)", Lattice::integer(2), 2.0f64.sqrt()),
        ("cube(3)", Lattice::integer(3), 3.0f64.sqrt()),
    ];
    for (name, lat, r) in fixtures {
        let d = lat.dim() as f64;
        let origin = nalgebra::DVector::zeros(lat.dim());
        let count = lat.enumerate_in_ball(&origin, 2.0 * r)?.len();
        let c = 4.0f64.powi(lat.dim() as i32) * d.powf(d / 2.0) + 1.0;
        let bound = c.powi(lat.dim() as i32);
        let mut ok = (count as f64) <= bound;
        if name == "hex" {
            ok &= count == 19;
        }
        passed &= ok;
        detail.push_str(&format!("{name}: {count} <= {bound:.3e}; "));
    }
    Ok(LemmaCheck::new("point-count-bound", passed, detail))
}

/// The mean uncovered density of K union (K + y) over random torus shifts y
/// matches delta^2 within three combined standard errors, on the disk, the
/// interval, and a fully covering body.
pub fn check_random_translation_squares(
    trials: usize,
    samples: usize,
    seed: u64,
) -> Result<LemmaCheck> {
    let mut detail = String::new();
    let mut passed = true;

    // Disk of radius 1/2 over Z^2: delta = 1 - pi/4.
    let disk = ProductBody::single_ball(2, 0.5);
    let out = random_translation_mean(&disk, trials, samples, seed)?;
    let delta = 1.0 - PI / 4.0;
    let target = delta * delta;
    let ok = (out.mean - target).abs() <= 3.0 * out.std_error.max(1e-12);
    passed &= ok;
    detail.push_str(&format!(
        "disk: mean {:.5} vs {:.5} (se {:.5}); ",
        out.mean, target, out.std_error
    ));

    // Interval of radius 1/4 over Z^1: delta = 1/2.
    let interval = ProductBody::single_ball(1, 0.25);
    let out = random_translation_mean(&interval, trials, samples, seed.wrapping_add(1))?;
    let ok = (out.mean - 0.25).abs() <= 3.0 * out.std_error.max(1e-12);
    passed &= ok;
    detail.push_str(&format!(
        "interval: mean {:.5} vs 0.25 (se {:.5}); ",
        out.mean, out.std_error
    ));

    // A body that already covers: the mean must be exactly zero.
    let covering = ProductBody::single_ball(2, 1.0001 * 2.0f64.sqrt() / 2.0);
    let out = random_translation_mean(&covering, trials.min(20), samples, seed.wrapping_add(2))?;
    let ok = out.mean == 0.0;
    passed &= ok;
    detail.push_str(&format!("covering: mean {:.1e}", out.mean));

    Ok(LemmaCheck::new("random-translation-squares", passed, detail))
}

fn random_unimodular_3x3(seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![vec![0i64; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..12 {
        let i = rng.random_range(0..3usize);
        let mut j = rng.random_range(0..3usize);
        while j == i {
            j = rng.random_range(0..3usize);
        }
        let c = *[-2i64, -1, 1, 2]
            .get(rng.random_range(0..4usize))
            .expect("index in range");
        for k in 0..3 {
            m[i][k] += c * m[j][k];
        }
    }
    m
}

/// Exact bijectivity of the torus map on the (1/64)-grid for the standard
/// shear and for a random 3x3 unimodular matrix, plus chi-square uniformity
/// of mapped uniform samples per coordinate pair.
pub fn check_torus_map_exactness(samples: usize, seed: u64) -> Result<LemmaCheck> {
    let mut detail = String::new();
    let mut passed = true;

    let shear = vec![vec![1i64, 1], vec![0, 1]];
    let ok = grid_bijectivity(&shear, 64)?;
    passed &= ok;
    detail.push_str(&format!("shear bijective on 64-grid: {ok}; "));

    let m3 = random_unimodular_3x3(seed);
    let det = integer_det(&m3)?;
    let ok_det = det == 1 || det == -1;
    let ok = ok_det && grid_bijectivity(&m3, 64)?;
    passed &= ok;
    detail.push_str(&format!("random 3x3 (det {det}) bijective: {ok}; "));

    // Uniformity of mapped samples, pairwise coordinates, 10x10 bins.
    for (name, m) in [("shear", &shear), ("random3", &m3)] {
        let d = m.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(17));
        let x = DMatrix::from_fn(d, samples, |_, _| rng.random::<f64>());
        let y = unimodular_torus_map(m, &x)?;
        let mut worst_p = 1.0f64;
        for a in 0..d {
            for b in (a + 1)..d {
                let mut bins = [[0usize; 10]; 10];
                for s in 0..samples {
                    let i = ((y[(a, s)] * 10.0) as usize).min(9);
                    let j = ((y[(b, s)] * 10.0) as usize).min(9);
                    bins[i][j] += 1;
                }
                let expect = samples as f64 / 100.0;
                let stat: f64 = bins
                    .iter()
                    .flatten()
                    .map(|&o| {
                        let diff = o as f64 - expect;
                        diff * diff / expect
                    })
                    .sum();
                let chi = ChiSquared::new(99.0).expect("valid dof");
                let p = 1.0 - chi.cdf(stat);
                worst_p = worst_p.min(p);
            }
        }
        let ok = worst_p > 0.001;
        passed &= ok;
        detail.push_str(&format!("{name} uniformity worst p = {worst_p:.4}; "));
    }

    Ok(LemmaCheck::new("torus-map-exactness", passed, detail))
}

fn grid_bijectivity(m: &[Vec<i64>], q: i64) -> Result<bool> {
    let d = m.len();
    let total = (q as usize).pow(d as u32);
    let mut seen = vec![false; total];
    let mut idx = vec![0i64; d];
    let mut count = 0usize;
    loop {
        let x = DMatrix::from_fn(d, 1, |i, _| idx[i] as f64 / q as f64);
        let y = unimodular_torus_map(m, &x)?;
        // The image must land exactly on the grid; accumulate its flat index.
        let mut flat = 0usize;
        for i in 0..d {
            let scaled = y[(i, 0)] * q as f64;
            let rounded = scaled.round();
            if (scaled - rounded).abs() > 1e-9 {
                return Ok(false);
            }
            let r = (rounded as i64).rem_euclid(q);
            flat = flat * q as usize + r as usize;
        }
        if seen[flat] {
            return Ok(false);
        }
        seen[flat] = true;
        count += 1;

        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < q {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == d {
                return Ok(count == total);
            }
        }
    }
}

/// The product body of radius-sqrt(d) blocks sits inside the ball of radius
/// sqrt(n): checked by its volume identity and by sampling.
pub fn check_product_containment(samples: usize, seed: u64) -> Result<LemmaCheck> {
    let mut detail = String::new();
    let mut passed = true;

    // Volume identity at (n, k, d) = (4, 1, 2).
    let v = product_volume(4, 1, 2)?;
    let expect = 4.0 * PI * PI;
    let ok = (v.volume - expect).abs() <= 1e-12 * expect;
    passed &= ok;
    detail.push_str(&format!("vol(K_(1,2)) = {:.9} vs 4 pi^2; ", v.volume));
    let ratio_ok = (v.ratio_to_ball - v.volume / ball_volume_sqrt_d(4)).abs() < 1e-15;
    passed &= ratio_ok;

    // Sampling: every point of B_sqrt(2)^2 x B_sqrt(2)^2 has norm <= 2.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = 2.0f64.sqrt();
    let mut failures = 0usize;
    for _ in 0..samples {
        let mut norm_sq = 0.0;
        for _ in 0..2 {
            // Rejection-sample a point of the radius-sqrt(2) disk.
            loop {
                let a = r * (2.0 * rng.random::<f64>() - 1.0);
                let b = r * (2.0 * rng.random::<f64>() - 1.0);
                if a * a + b * b <= r * r {
                    norm_sq += a * a + b * b;
                    break;
                }
            }
        }
        if norm_sq > 4.0 + 1e-9 {
            failures += 1;
        }
    }
    let ok = failures == 0;
    passed &= ok;
    detail.push_str(&format!("{samples} samples, {failures} outside B_2"));

    Ok(LemmaCheck::new("product-containment", passed, detail))
}

/// Run the complete bundle with the given budgets.
pub fn run_all(trials: usize, samples: usize, seed: u64) -> Result<Vec<LemmaCheck>> {
    Ok(vec![
        check_parallelepiped_count_bound()?,
        check_point_count_bound()?,
        check_random_translation_squares(trials, samples, seed)?,
        check_torus_map_exactness(samples.max(10_000), seed)?,
        check_product_containment(samples.max(10_000), seed)?,
    ])
}
