//! Monte Carlo estimation of the uncovered density of Λ + K, where K is a
//! union of translates of a scaled product of per-block balls.
//!
//! Sampling is uniform on the fundamental parallelepiped of the lattice
//! (uniform coefficients mapped through the basis), which by periodicity of
//! the covered set gives the torus density. Samples are drawn in fixed-size
//! chunks, each chunk on its own RNG stream keyed by (seed, chunk index), so
//! serial and parallel runs produce bit-identical results.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Declared chunk size of the sampling streams. Part of the reproducibility
/// contract: changing it changes every estimate.
pub const CHUNK_SAMPLES: usize = 4096;

const Z95: f64 = 1.959963984540054;

/// A union of translates of a scaled Cartesian product of balls.
///
/// `blocks` lists (dimension, radius) per coordinate block; `scale` dilates
/// the whole product; membership is the union over `translates` of the scaled
/// product. The ambient dimension is the sum of the block dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductBody {
    pub blocks: Vec<(usize, f64)>,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub translates: Vec<Vec<f64>>,
}

fn default_scale() -> f64 {
    1.0
}

impl ProductBody {
    /// A single ball of the given dimension and radius, centred at 0.
    pub fn single_ball(dim: usize, radius: f64) -> Self {
        ProductBody {
            blocks: vec![(dim, radius)],
            scale: 1.0,
            translates: vec![vec![0.0; dim]],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.blocks.iter().map(|(d, _)| d).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::invalid("body needs at least one block"));
        }
        if self.blocks.iter().any(|&(d, r)| d == 0 || !(r >= 0.0) || !r.is_finite()) {
            return Err(Error::invalid(
                "every block needs positive dimension and finite nonnegative radius",
            ));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::invalid("scale must be positive and finite"));
        }
        if self.translates.is_empty() {
            return Err(Error::invalid("translates must be non-empty"));
        }
        let n = self.ambient_dim();
        for t in &self.translates {
            if t.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: t.len(),
                });
            }
        }
        Ok(())
    }

    /// Radius of the smallest ball (around each translate) containing the
    /// scaled product: scale * sqrt(sum of squared block radii).
    pub fn enclosing_radius(&self) -> f64 {
        self.scale
            * self
                .blocks
                .iter()
                .map(|&(_, r)| r * r)
                .sum::<f64>()
                .sqrt()
    }

    /// Equivalent body with the scale folded into the block radii.
    pub fn normalized(&self) -> ProductBody {
        ProductBody {
            blocks: self
                .blocks
                .iter()
                .map(|&(d, r)| (d, r * self.scale))
                .collect(),
            scale: 1.0,
            translates: self.translates.clone(),
        }
    }

    /// The Cartesian product of this body with a ball: blocks gain a final
    /// (dim, radius) entry and every translate is zero-padded.
    pub fn product_with_ball(&self, dim: usize, radius: f64) -> ProductBody {
        let mut out = self.normalized();
        out.blocks.push((dim, radius));
        for t in &mut out.translates {
            t.extend(std::iter::repeat(0.0).take(dim));
        }
        out
    }

    /// The same body dilated by `factor`.
    pub fn scaled(&self, factor: f64) -> ProductBody {
        ProductBody {
            blocks: self.blocks.clone(),
            scale: self.scale * factor,
            translates: self.translates.clone(),
        }
    }

    /// The union of this body with its copy shifted by `shift`.
    pub fn union_with_shifted(&self, shift: &[f64]) -> ProductBody {
        let mut translates = self.translates.clone();
        translates.extend(self.translates.iter().map(|t| {
            t.iter().zip(shift).map(|(a, b)| a + b).collect::<Vec<f64>>()
        }));
        ProductBody {
            blocks: self.blocks.clone(),
            scale: self.scale,
            translates,
        }
    }

    /// Whether an offset (already relative to a lattice point and translate)
    /// lies in the scaled product: every block component within its radius.
    fn offset_inside(&self, offset: &[f64]) -> bool {
        let mut at = 0usize;
        for &(d, r) in &self.blocks {
            let mut norm_sq = 0.0;
            for k in at..at + d {
                norm_sq += offset[k] * offset[k];
            }
            let rr = self.scale * r;
            if norm_sq > rr * rr + 1e-12 * rr.max(1.0) {
                return false;
            }
            at += d;
        }
        true
    }
}

/// Monte Carlo estimate of an uncovered density, with its binomial 95%
/// confidence halfwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub estimate: f64,
    pub samples: usize,
    pub seed: u64,
    pub ci95_halfwidth: f64,
    pub method: String,
}

impl DensityEstimate {
    /// Conservative upper end of the confidence interval, clamped to [0, 1].
    pub fn ci_upper(&self) -> f64 {
        (self.estimate + self.ci95_halfwidth).min(1.0)
    }
}

/// Is `x` covered by some lattice translate of the body?
///
/// For each body translate t, candidate lattice points are enumerated inside
/// the enclosing ball around x - t (a superset of the product region) and
/// then filtered block by block.
pub fn body_membership(lat: &Lattice, body: &ProductBody, x: &DVector<f64>) -> Result<bool> {
    body.validate()?;
    let n = lat.dim();
    if body.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: body.ambient_dim(),
        });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let r_enc = body.enclosing_radius();
    let mut offset = vec![0.0f64; n];
    for t in &body.translates {
        let shifted = DVector::from_iterator(n, x.iter().zip(t).map(|(a, b)| a - b));
        let candidates = lat.enumerate_in_ball(&shifted, r_enc)?;
        for p in candidates {
            for k in 0..n {
                offset[k] = shifted[k] - p.coords[k];
            }
            if body.offset_inside(&offset) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Draw the chunk of samples with index `chunk` as uniform coefficient
/// vectors in [0,1)^n, mapped through the lattice basis.
fn chunk_samples(lat: &Lattice, seed: u64, chunk: usize, count: usize) -> Vec<DVector<f64>> {
    let n = lat.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    (0..count)
        .map(|_| {
            let u = DVector::from_iterator(n, (0..n).map(|_| rng.random::<f64>()));
            lat.basis() * u
        })
        .collect()
}

fn chunk_bounds(samples: usize, chunk: usize) -> usize {
    let start = chunk * CHUNK_SAMPLES;
    (samples - start).min(CHUNK_SAMPLES)
}

/// Estimate the uncovered density of Λ + body from `samples` uniform points
/// of the fundamental parallelepiped. Deterministic given the seed.
pub fn estimate_uncovered_density(
    lat: &Lattice,
    body: &ProductBody,
    samples: usize,
    seed: u64,
) -> Result<DensityEstimate> {
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    body.validate()?;
    let chunks = samples.div_ceil(CHUNK_SAMPLES);
    let misses: usize = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<usize> {
            let pts = chunk_samples(lat, seed, chunk, chunk_bounds(samples, chunk));
            let mut miss = 0usize;
            for x in &pts {
                if !body_membership(lat, body, x)? {
                    miss += 1;
                }
            }
            Ok(miss)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    let n = samples as f64;
    let p_hat = misses as f64 / n;
    let (hw, method) = if misses == 0 || misses == samples {
        // Rule of three: one-sided 95% bound when no event was observed.
        (3.0 / n, "rule-of-three")
    } else {
        let z2 = Z95 * Z95;
        let hw = Z95 * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
        (hw, "wilson")
    };
    Ok(DensityEstimate {
        estimate: p_hat,
        samples,
        seed,
        ci95_halfwidth: hw,
        method: method.to_string(),
    })
}

/// Result of an empirical covering check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageCheck {
    pub all_covered: bool,
    pub first_failure: Option<Vec<f64>>,
    pub samples: usize,
    pub seed: u64,
}

/// Check membership at every sampled point, short-circuiting on the first
/// failure (first in sample order, independent of thread count).
pub fn verify_covering_empirical(
    lat: &Lattice,
    body: &ProductBody,
    samples: usize,
    seed: u64,
) -> Result<CoverageCheck> {
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    body.validate()?;
    let chunks = samples.div_ceil(CHUNK_SAMPLES);
    let failure: Option<Result<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .find_map_first(|chunk| {
            let pts = chunk_samples(lat, seed, chunk, chunk_bounds(samples, chunk));
            for x in &pts {
                match body_membership(lat, body, x) {
                    Ok(true) => continue,
                    Ok(false) => return Some(Ok(x.iter().copied().collect())),
                    Err(e) => return Some(Err(e)),
                }
            }
            None
        });
    let first_failure = match failure {
        None => None,
        Some(Ok(w)) => Some(w),
        Some(Err(e)) => return Err(e),
    };
    Ok(CoverageCheck {
        all_covered: first_failure.is_none(),
        first_failure,
        samples,
        seed,
    })
}
