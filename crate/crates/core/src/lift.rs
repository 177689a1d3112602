//! Randomized dimension lifting: extend an n-dimensional near-covering
//! (Λ, K) to n+d dimensions using a robust d-dimensional covering and d
//! uniformly random torus translations. Each accepted lift squares-to-the-2^d
//! the uncovered density; iterating and then dilating the body by (1 + 1/n)
//! turns a good-enough near-covering into an actual covering.

use crate::constants::{ball_volume_sqrt_d, lift_constants};
use crate::density::{
    estimate_uncovered_density, verify_covering_empirical, CoverageCheck, DensityEstimate,
    ProductBody,
};
use crate::error::{Error, Result};
use crate::io::LatticeDoc;
use crate::lattice::{hex_lattice, Lattice};
use crate::robust::{builtin_covering, enumerate_fundamental_parallelepipeds};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Absolute tolerance when checking that a vector's basis coefficients are
/// integers (i.e. that it is a lattice point).
pub const LATTICE_COEFF_TOL: f64 = 1e-6;

const TAG_ESTIMATE: u64 = 0xD1B5_4A32_D192_ED03;
const TAG_STAGE: u64 = 0x9E37_79B9_7F4A_7C15;

fn derive_seed(seed: u64, tag: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x2545_F491_4F6C_DD1D)
        .wrapping_add(tag)
        .wrapping_add((index as u64).wrapping_mul(0x4CF5_AD43_2745_937F))
}

/// A robust lattice covering (Λ_d, radius) used as the lifting block.
#[derive(Debug, Clone)]
pub struct RobustCovering {
    pub lattice: Lattice,
    pub radius: f64,
}

impl RobustCovering {
    pub fn new(lattice: Lattice, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("robust radius must be positive and finite"));
        }
        Ok(RobustCovering { lattice, radius })
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let (lattice, radius) = builtin_covering(name)?;
        Ok(RobustCovering { lattice, radius })
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Covering density vol(B_r^d) / |det|.
    pub fn density(&self) -> f64 {
        self.lattice.covering_density(self.radius)
    }

    /// The lifting argument requires density at most nu_d.
    pub fn check_density(&self) -> Result<()> {
        let nu = ball_volume_sqrt_d(self.dim());
        let density = self.density();
        if density > nu * (1.0 + 1e-9) {
            return Err(Error::DensityOutOfRange {
                density,
                max: nu,
                d: self.dim(),
            });
        }
        Ok(())
    }
}

/// The linear map sending a point of the robust lattice to the corresponding
/// integer combination of the sampled torus translations: a point with basis
/// coefficients mu maps to sum_j mu_j y_j.
#[derive(Debug, Clone)]
pub struct TranslationMap {
    basis_inv: DMatrix<f64>,
    ys: Vec<DVector<f64>>,
}

impl TranslationMap {
    pub fn new(robust_basis: &DMatrix<f64>, ys: Vec<DVector<f64>>) -> Result<Self> {
        let d = robust_basis.ncols();
        if ys.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: ys.len(),
            });
        }
        let basis_inv = robust_basis
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::invalid("robust basis is singular"))?;
        Ok(TranslationMap { basis_inv, ys })
    }

    /// Apply the map to a lattice point `z` (ambient coordinates). Errors if
    /// z is not a lattice point within `LATTICE_COEFF_TOL`.
    pub fn apply(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        let coeffs = &self.basis_inv * z;
        let mut deviation = 0.0f64;
        let mut mu = Vec::with_capacity(coeffs.len());
        for c in coeffs.iter() {
            let r = c.round();
            deviation = deviation.max((c - r).abs());
            mu.push(r);
        }
        if deviation > LATTICE_COEFF_TOL {
            return Err(Error::NotALatticePoint {
                coeffs: coeffs.iter().copied().collect(),
                deviation,
            });
        }
        let n = self.ys[0].len();
        let mut out = DVector::zeros(n);
        for (m, y) in mu.iter().zip(&self.ys) {
            out += y * *m;
        }
        Ok(out)
    }
}

/// Exact integer determinant (Bareiss elimination in i128).
pub fn integer_det(m: &[Vec<i64>]) -> Result<i128> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::invalid("matrix must be square and non-empty"));
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0);
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Apply a unimodular integer matrix to a d x n array of torus coordinates:
/// X maps to M X mod 1, componentwise. Bijective and measure-preserving on
/// the torus; rejects matrices whose integer determinant is not +-1.
pub fn unimodular_torus_map(m: &[Vec<i64>], x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let det = integer_det(m)?;
    if det != 1 && det != -1 {
        return Err(Error::NotUnimodular(det));
    }
    let d = m.len();
    if x.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x.nrows(),
        });
    }
    let mf = DMatrix::from_fn(d, d, |i, j| m[i][j] as f64);
    Ok((mf * x).map(|v| v.rem_euclid(1.0)))
}

/// An (n+d)-dimensional lattice built from a base lattice, a robust covering
/// block, and d torus translations: the base generators padded with zeros
/// plus one column (y_j, b_j) per robust generator.
#[derive(Debug, Clone)]
pub struct LiftedLattice {
    pub base: Lattice,
    pub robust: RobustCovering,
    pub ys: Vec<DVector<f64>>,
    pub lifted: Lattice,
}

impl LiftedLattice {
    /// Assemble the lift for explicitly given translations (each in [0,1)^n).
    pub fn with_translations(
        base: &Lattice,
        robust: &RobustCovering,
        ys: Vec<DVector<f64>>,
    ) -> Result<Self> {
        let n = base.dim();
        let d = robust.dim();
        if ys.len() != d || ys.iter().any(|y| y.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: ys.len(),
            });
        }
        let mut basis = DMatrix::zeros(n + d, n + d);
        for j in 0..n {
            for i in 0..n {
                basis[(i, j)] = base.basis()[(i, j)];
            }
        }
        for j in 0..d {
            for i in 0..n {
                basis[(i, n + j)] = ys[j][i];
            }
            for i in 0..d {
                basis[(n + i, n + j)] = robust.lattice.basis()[(i, j)];
            }
        }
        let lifted = Lattice::from_basis(basis)?;
        Ok(LiftedLattice {
            base: base.clone(),
            robust: robust.clone(),
            ys,
            lifted,
        })
    }

    pub fn translation_map(&self) -> Result<TranslationMap> {
        TranslationMap::new(self.robust.lattice.basis(), self.ys.clone())
    }
}

/// Sample d torus translations uniformly and assemble the lifted lattice.
/// Does not evaluate the quality of the lift.
pub fn random_lift(
    base: &Lattice,
    robust: &RobustCovering,
    body: &ProductBody,
    seed: u64,
) -> Result<LiftedLattice> {
    robust.check_density()?;
    if body.ambient_dim() != base.dim() {
        return Err(Error::DimensionMismatch {
            expected: base.dim(),
            got: body.ambient_dim(),
        });
    }
    let ys = sample_translations(base.dim(), robust.dim(), seed, 0);
    LiftedLattice::with_translations(base, robust, ys)
}

fn sample_translations(n: usize, d: usize, seed: u64, try_index: usize) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(try_index as u64);
    (0..d)
        .map(|_| DVector::from_iterator(n, (0..n).map(|_| rng.random::<f64>())))
        .collect()
}

/// Knobs for the accept/reject loop around random lifts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftOptions {
    /// Monte Carlo samples per candidate estimate.
    pub samples: usize,
    /// Empirical acceptance coefficient: accept when the CI upper bound is at
    /// most tau * delta^(2^d).
    pub tau: f64,
    /// Use the analytic per-lift constant instead of tau. The analytic value
    /// is astronomically loose; this exists for fidelity runs.
    pub paper_constants: bool,
    /// Check every anchored-parallelepiped event separately (union bodies
    /// K shifted by the translation map over each vertex set) instead of the
    /// single product-body consequence.
    pub per_event: bool,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            samples: 200_000,
            tau: 3.0,
            paper_constants: false,
            per_event: false,
        }
    }
}

/// An accepted lift together with its density estimate and the try count.
#[derive(Debug, Clone)]
pub struct LiftOutcome {
    pub lift: LiftedLattice,
    pub estimate: DensityEstimate,
    pub tries: usize,
    pub threshold: f64,
}

/// Sample lifts until the estimated uncovered density of the lifted pair
/// clears the acceptance threshold coefficient * delta^(2^d) at the CI upper
/// bound, or `max_tries` candidates have been rejected.
///
/// The threshold never drops below the zero-miss resolution 3/samples: below
/// that no Monte Carlo certificate is possible at all, and a candidate with
/// zero observed misses is accepted as indistinguishable from covering.
pub fn lift_until_good(
    base: &Lattice,
    robust: &RobustCovering,
    body: &ProductBody,
    delta: f64,
    seed: u64,
    max_tries: usize,
    opts: &LiftOptions,
) -> Result<LiftOutcome> {
    if max_tries == 0 {
        return Err(Error::MaxTriesExceeded {
            tries: 0,
            best_upper: None,
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    robust.check_density()?;
    if body.ambient_dim() != base.dim() {
        return Err(Error::DimensionMismatch {
            expected: base.dim(),
            got: body.ambient_dim(),
        });
    }
    let d = robust.dim();
    let coefficient = if opts.paper_constants {
        lift_constants(d)?.c_lift
    } else {
        opts.tau
    };
    let threshold =
        (coefficient * delta.powf((1u64 << d) as f64)).max(3.0 / opts.samples as f64);

    let lifted_body = body.product_with_ball(d, robust.radius);
    let mut best_upper = f64::INFINITY;
    for try_index in 0..max_tries {
        let ys = sample_translations(base.dim(), d, seed, try_index);
        let lift = LiftedLattice::with_translations(base, robust, ys)?;
        let est_seed = derive_seed(seed, TAG_ESTIMATE, try_index);
        let estimate = if opts.per_event {
            per_event_worst_estimate(base, &lift, body, opts.samples, est_seed)?
        } else {
            estimate_uncovered_density(&lift.lifted, &lifted_body, opts.samples, est_seed)?
        };
        let upper = estimate.ci_upper();
        if upper <= threshold {
            return Ok(LiftOutcome {
                lift,
                estimate,
                tries: try_index + 1,
                threshold,
            });
        }
        best_upper = best_upper.min(upper);
    }
    Err(Error::MaxTriesExceeded {
        tries: max_tries,
        best_upper: Some(best_upper),
    })
}

/// Worst per-event estimate: for every anchored fundamental parallelepiped P
/// of the robust block (inside the doubled ball), estimate the uncovered
/// density of the base lattice plus the union of K shifted by the translation
/// map over the vertices of P.
fn per_event_worst_estimate(
    base: &Lattice,
    lift: &LiftedLattice,
    body: &ProductBody,
    samples: usize,
    seed: u64,
) -> Result<DensityEstimate> {
    let phi = lift.translation_map()?;
    let paras =
        enumerate_fundamental_parallelepipeds(&lift.robust.lattice, 2.0 * lift.robust.radius)?;
    if paras.is_empty() {
        return Err(Error::invalid(
            "robust covering has no anchored parallelepiped at the doubled radius",
        ));
    }
    let mut worst: Option<DensityEstimate> = None;
    for (i, p) in paras.iter().enumerate() {
        let mut translates = Vec::with_capacity(body.translates.len() * p.vertices.len());
        for t in &body.translates {
            for v in &p.vertices {
                let shift = phi.apply(v)?;
                translates.push(t.iter().zip(shift.iter()).map(|(a, b)| a + b).collect());
            }
        }
        let event_body = ProductBody {
            blocks: body.blocks.clone(),
            scale: body.scale,
            translates,
        };
        let est = estimate_uncovered_density(base, &event_body, samples, derive_seed(seed, TAG_ESTIMATE, i))?;
        if worst
            .as_ref()
            .map(|w| est.ci_upper() > w.ci_upper())
            .unwrap_or(true)
        {
            worst = Some(est);
        }
    }
    Ok(worst.expect("at least one event"))
}

/// Mean outcome of repeated random-translation experiments over Z^n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranslationMean {
    pub mean: f64,
    pub trials: usize,
    pub samples_per_trial: usize,
    /// Standard error of the mean across trials (captures both the Monte
    /// Carlo noise and the spread over translations).
    pub std_error: f64,
}

/// Average, over random torus translations y, of the estimated uncovered
/// density of Z^n plus K union (K + y).
pub fn random_translation_mean(
    body: &ProductBody,
    trials: usize,
    samples: usize,
    seed: u64,
) -> Result<TranslationMean> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    body.validate()?;
    let n = body.ambient_dim();
    let lat = Lattice::integer(n);
    let mut estimates = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let shifted = body.union_with_shifted(&y);
        let est =
            estimate_uncovered_density(&lat, &shifted, samples, derive_seed(seed, TAG_ESTIMATE, t))?;
        estimates.push(est.estimate);
    }
    let mean = estimates.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (trials as f64 - 1.0)
    } else {
        0.0
    };
    Ok(TranslationMean {
        mean,
        trials,
        samples_per_trial: samples,
        std_error: (var / trials as f64).sqrt(),
    })
}

/// Dilate the body by (1 + 1/n) and report the uncovered-density threshold
/// (n^n + 1)^-1 under which the dilated pair is guaranteed to cover.
pub fn expand_body(body: &ProductBody, n: usize) -> Result<(ProductBody, f64)> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let nf = n as f64;
    let threshold = 1.0 / (nf.powi(n as i32) + 1.0);
    Ok((body.scaled(1.0 + 1.0 / nf), threshold))
}

/// One pipeline stage: the lattice/body pair after a lift, with its estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecord {
    pub dim: usize,
    pub lattice: LatticeDoc,
    pub body: ProductBody,
    pub delta_estimate: DensityEstimate,
    /// Number of candidate lifts tried at this stage (0 for the initial one).
    pub resamples: usize,
    /// Acceptance threshold in force at this stage (absent for the initial).
    pub threshold: Option<f64>,
}

/// Full record of a pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineResult {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub robust_name: String,
    pub seed: u64,
    pub samples: usize,
    pub stages: Vec<StageRecord>,
    pub final_lattice: LatticeDoc,
    /// Final body after the (1 + 1/n) expansion.
    pub final_body: ProductBody,
    /// Uncovered-density threshold that justifies the expansion.
    pub expansion_threshold: f64,
    /// Whether the last measured estimate met the expansion threshold.
    pub expansion_hypothesis_met: bool,
    /// Covering density against the smallest enclosing ball after rescaling
    /// each block to the common sqrt(dim) profile.
    pub final_density: f64,
    pub coverage_check: CoverageCheck,
}

/// Pipeline inputs. `initial` defaults to the best built-in covering at the
/// start dimension with its ball bisected so the measured initial uncovered
/// density hits `initial_delta`.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub robust_name: String,
    pub initial: Option<(Lattice, ProductBody)>,
    pub initial_delta: f64,
    pub samples: usize,
    pub seed: u64,
    pub max_tries: usize,
    pub opts: LiftOptions,
}

impl PipelineConfig {
    pub fn new(n: usize, d: usize, k: usize, robust_name: impl Into<String>) -> Self {
        PipelineConfig {
            n,
            d,
            k,
            robust_name: robust_name.into(),
            initial: None,
            initial_delta: 0.1,
            samples: 100_000,
            seed: 1,
            max_tries: 20,
            opts: LiftOptions::default(),
        }
    }
}

/// The best built-in covering lattice at dimension `m` (hexagonal in the
/// plane, integer lattice otherwise), with a single-ball body whose radius is
/// bisected until the measured uncovered density matches `target_delta`.
pub fn default_initial(
    m: usize,
    target_delta: f64,
    samples: usize,
    seed: u64,
) -> Result<(Lattice, ProductBody)> {
    if !(target_delta > 0.0 && target_delta < 1.0) {
        return Err(Error::invalid("target delta must lie in (0, 1)"));
    }
    let lat = match m {
        0 => return Err(Error::invalid("dimension must be >= 1")),
        2 => hex_lattice(),
        _ => Lattice::integer(m),
    };
    // Any radius beyond the covering radius gives delta 0; bracket from the
    // cell diagonal down. The same seed is reused at every probe, so the
    // measured delta is monotone in the radius and bisection is clean.
    let (box_lo, box_hi) = lat.cell_bounding_box();
    let mut hi = (&box_hi - &box_lo).norm();
    let mut lo = 0.0f64;
    let measure = |r: f64| -> Result<f64> {
        let body = ProductBody::single_ball(m, r);
        Ok(estimate_uncovered_density(&lat, &body, samples, seed)?.estimate)
    };
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        let delta = measure(mid)?;
        if (delta - target_delta).abs() <= 0.002 {
            return Ok((lat, ProductBody::single_ball(m, mid)));
        }
        if delta > target_delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok((lat, ProductBody::single_ball(m, mid)))
}

/// Run the full construction: measure the initial pair, lift k times through
/// the robust covering, dilate by (1 + 1/n), verify coverage empirically, and
/// report the covering density of the enclosing-ball covering.
pub fn pipeline(cfg: &PipelineConfig) -> Result<PipelineResult> {
    let robust = RobustCovering::from_name(&cfg.robust_name)?;
    if robust.dim() != cfg.d {
        return Err(Error::infeasible(format!(
            "robust covering {} has dimension {}, expected d = {}",
            cfg.robust_name,
            robust.dim(),
            cfg.d
        )));
    }
    if cfg.n < cfg.k * cfg.d + 1 {
        return Err(Error::infeasible(format!(
            "need n >= k*d + 1 (n = {}, k*d = {})",
            cfg.n,
            cfg.k * cfg.d
        )));
    }
    let m = cfg.n - cfg.k * cfg.d;
    let (mut lat, mut body) = match &cfg.initial {
        Some((l, b)) => (l.clone(), b.clone()),
        None => default_initial(m, cfg.initial_delta, cfg.samples, derive_seed(cfg.seed, TAG_STAGE, 0))?,
    };
    if lat.dim() != m || body.ambient_dim() != m {
        return Err(Error::infeasible(format!(
            "initial pair must live in dimension n - k*d = {m}"
        )));
    }

    let mut stages = Vec::with_capacity(cfg.k + 1);
    let initial_est = estimate_uncovered_density(
        &lat,
        &body,
        cfg.samples,
        derive_seed(cfg.seed, TAG_ESTIMATE, 0),
    )?;
    if initial_est.estimate >= 1.0 {
        return Err(Error::invalid("initial pair covers nothing"));
    }
    stages.push(StageRecord {
        dim: m,
        lattice: LatticeDoc::from_lattice(&lat, None),
        body: body.clone(),
        delta_estimate: initial_est.clone(),
        resamples: 0,
        threshold: None,
    });

    let mut delta = positive_delta(&initial_est);
    for stage in 1..=cfg.k {
        let outcome = lift_until_good(
            &lat,
            &robust,
            &body,
            delta,
            derive_seed(cfg.seed, TAG_STAGE, stage),
            cfg.max_tries,
            &cfg.opts,
        )?;
        lat = outcome.lift.lifted.clone();
        body = body.product_with_ball(cfg.d, robust.radius);
        stages.push(StageRecord {
            dim: lat.dim(),
            lattice: LatticeDoc::from_lattice(&lat, None),
            body: body.clone(),
            delta_estimate: outcome.estimate.clone(),
            resamples: outcome.tries,
            threshold: Some(outcome.threshold),
        });
        delta = positive_delta(&outcome.estimate);
    }

    let last_estimate = stages.last().expect("at least the initial stage").delta_estimate.clone();
    let (final_body, expansion_threshold) = expand_body(&body, cfg.n)?;
    let coverage_check = verify_covering_empirical(
        &lat,
        &final_body,
        cfg.samples,
        derive_seed(cfg.seed, TAG_ESTIMATE, cfg.k + 1),
    )?;
    if !coverage_check.all_covered {
        return Err(Error::CoverageCheckFailed {
            witness: coverage_check.first_failure.unwrap_or_default(),
        });
    }

    let final_density = enclosing_ball_density(&lat, &final_body);
    Ok(PipelineResult {
        n: cfg.n,
        d: cfg.d,
        k: cfg.k,
        robust_name: cfg.robust_name.clone(),
        seed: cfg.seed,
        samples: cfg.samples,
        stages,
        final_lattice: LatticeDoc::from_lattice(&lat, None),
        final_body: final_body.clone(),
        expansion_threshold,
        expansion_hypothesis_met: last_estimate.estimate <= expansion_threshold,
        final_density,
        coverage_check,
    })
}

fn positive_delta(est: &DensityEstimate) -> f64 {
    if est.estimate > 0.0 {
        est.estimate
    } else {
        // Zero misses: fall back to the one-sided upper bound so the next
        // stage still has a positive target.
        est.ci_upper().max(f64::MIN_POSITIVE)
    }
}

/// Covering density of the pair after rescaling each block of the body to
/// the radius-sqrt(dim) profile: the rescaled product sits inside the ball of
/// radius sqrt(ambient dim), so the pair (T(lattice), B_sqrt(n)) covers
/// whenever (lattice, body) does. Equals nu_n * prod_j (scale r_j /
/// sqrt(d_j))^(d_j) / |det|.
pub fn enclosing_ball_density(lat: &Lattice, body: &ProductBody) -> f64 {
    let n = body.ambient_dim();
    let mut log_det_t_inv = 0.0f64;
    for &(dj, rj) in &body.blocks {
        log_det_t_inv += dj as f64 * (body.scale * rj / (dj as f64).sqrt()).ln();
    }
    (ball_volume_sqrt_d(n).ln() + log_det_t_inv - lat.det_abs().ln()).exp()
}
