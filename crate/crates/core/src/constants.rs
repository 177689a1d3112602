//! Closed-form constants and bound calculators for sphere-covering densities.
//!
//! Everything here is a pure function of small integers and reals: ball
//! volumes, the covering-density exponents, the initial-covering parameters,
//! the per-lift blow-up constants, the full parameter schedule for the
//! dimension-lifting pipeline, and the lower-bound floor for robust coverings.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{E, PI};

/// Half the binary log of 2*pi*e: the exponent achieved by the cube-based
/// covering construction (approx 2.0471).
pub fn alpha_exponent() -> f64 {
    0.5 * (2.0 * PI * E).log2()
}

/// Half the binary log of 8*pi*e/(3*sqrt(3)): the exponent achieved when the
/// hexagonal robust covering drives the lift (approx 1.85837).
pub fn beta_exponent() -> f64 {
    0.5 * (8.0 * PI * E / (3.0 * 3.0f64.sqrt())).log2()
}

/// Volume of the Euclidean ball of radius `r` in `dim` dimensions,
/// computed through log-gamma for stability at large `dim`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let d = dim as f64;
    (0.5 * d * PI.ln() + d * r.ln() - ln_gamma(0.5 * d + 1.0)).exp()
}

/// Volume of the radius-sqrt(d) ball in d dimensions: (pi*d)^(d/2) / Gamma(d/2+1).
///
/// This is the covering density of the cube covering (Z^d with radius sqrt(d)),
/// and the natural normalizer for robust-covering densities.
pub fn ball_volume_sqrt_d(d: usize) -> f64 {
    let df = d as f64;
    (0.5 * df * (PI * df).ln() - ln_gamma(0.5 * df + 1.0)).exp()
}

/// Density-bound exponents for a given block dimension `d` and a witnessed
/// robust covering density `big_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    /// Baseline exponent 0.5*log2(2*pi*e), independent of inputs.
    pub alpha: f64,
    /// Hexagonal-covering exponent 0.5*log2(8*pi*e/(3*sqrt(3))), independent of inputs.
    pub beta: f64,
    /// Exponent alpha - (1/d)*log2(nu_d / D) for the supplied (d, D).
    pub gamma: f64,
    pub d: usize,
    /// Robust covering density used for gamma.
    pub big_d: f64,
}

/// Compute the exponent report for block dimension `d` and robust density `big_d`.
///
/// Requires 0 < big_d <= nu_d; a larger density would leave the regime where
/// the lifting argument applies.
pub fn exponents(d: usize, big_d: f64) -> Result<ExponentReport> {
    if d == 0 {
        return Err(Error::invalid("block dimension d must be >= 1"));
    }
    let nu = ball_volume_sqrt_d(d);
    // Tiny relative slack so that D = nu_d (the cube covering itself) is not
    // rejected over log-gamma rounding.
    if !(big_d > 0.0) || big_d > nu * (1.0 + 1e-9) {
        return Err(Error::DensityOutOfRange {
            density: big_d,
            max: nu,
            d,
        });
    }
    let alpha = alpha_exponent();
    let gamma = alpha - (nu / big_d).log2() / d as f64;
    Ok(ExponentReport {
        alpha,
        beta: beta_exponent(),
        gamma,
        d,
        big_d,
    })
}

/// Parameters of the classical initial almost-covering in dimension `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RogersInitialParams {
    pub m: usize,
    /// eta_m = (m/4) ln(27/16) - 3 ln m. Negative for small m.
    pub eta: f64,
    /// Uncovered-density bound m^3 (16/27)^(m/4), with the multiplicative
    /// constant taken as 1 (see `c_assumed_one`).
    pub delta0_bound: f64,
    /// Set when eta <= 0, i.e. the asymptotic formula is vacuous at this m.
    pub eta_negative: bool,
    /// The bound's leading constant is not pinned down by the source material;
    /// it is reported with the constant set to 1, flagged here.
    pub c_assumed_one: bool,
}

/// Evaluate the initial-covering parameters eta_m and the delta_0 bound.
pub fn rogers_initial_params(m: usize) -> Result<RogersInitialParams> {
    if m == 0 {
        return Err(Error::invalid("m must be >= 1"));
    }
    let mf = m as f64;
    let eta = 0.25 * mf * (27.0f64 / 16.0).ln() - 3.0 * mf.ln();
    let delta0_bound = mf.powi(3) * (16.0f64 / 27.0).powf(0.25 * mf);
    Ok(RogersInitialParams {
        m,
        eta,
        delta0_bound,
        eta_negative: eta <= 0.0,
        c_assumed_one: true,
    })
}

/// The two combinatorial constants that control a single lifting step in
/// block dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftConstants {
    pub d: usize,
    /// Bound on the number of anchored fundamental parallelepipeds inside the
    /// doubled ball: (4^d d^(d/2) + 1)^(d 2^d). Overflows f64 for d >= 5.
    pub c_points: f64,
    /// Per-lift density blow-up constant ((c_points + 1) d)^(2^d - 1).
    pub c_lift: f64,
    /// log2 of `c_points`, finite for all supported d.
    pub log2_c_points: f64,
    /// log2 of `c_lift`, finite for all supported d.
    pub log2_c_lift: f64,
}

/// Evaluate the parallelepiped-count constant and the lift blow-up constant.
///
/// Supported for 1 <= d <= 6; beyond that the doubly-exponential growth makes
/// the values useless even in log form. The linear fields overflow to
/// infinity from d = 5 on; the log2 fields stay finite.
pub fn lift_constants(d: usize) -> Result<LiftConstants> {
    if d == 0 || d > 6 {
        return Err(Error::invalid(format!(
            "lift constants supported for 1 <= d <= 6, got {d}"
        )));
    }
    let df = d as f64;
    let base = 4.0f64.powi(d as i32) * df.powf(0.5 * df) + 1.0;
    let exp_pts = d * (1usize << d);
    let c_points = base.powi(exp_pts as i32);
    let log2_c_points = exp_pts as f64 * base.log2();

    let exp_lift = (1usize << d) - 1;
    // (c_points + 1) in log space; the +1 is negligible once c_points is huge.
    let log2_base_lift = if c_points.is_finite() {
        ((c_points + 1.0) * df).log2()
    } else {
        log2_c_points + df.log2()
    };
    let log2_c_lift = exp_lift as f64 * log2_base_lift;
    let c_lift = if c_points.is_finite() {
        ((c_points + 1.0) * df).powi(exp_lift as i32)
    } else {
        f64::INFINITY
    };

    Ok(LiftConstants {
        d,
        c_points,
        c_lift,
        log2_c_points,
        log2_c_lift,
    })
}

/// How the pipeline parameters are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ParamMode {
    /// `k` from the asymptotic window ceil((1/d) log2 ln n + 4); eta from the
    /// closed formula. Meaningful only for large n.
    Asymptotic,
    /// Explicit `k`, with an optional eta override for desk-scale runs where
    /// the asymptotic eta is negative.
    Manual { k: usize, eta_override: Option<f64> },
}

/// Full parameter set for a `k`-stage lifting pipeline in ambient dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    /// Initial-covering parameter at m = n - k*d (possibly overridden).
    pub eta: f64,
    /// Uncovered-density bound for the initial stage.
    pub delta0_bound: f64,
    /// delta_0..delta_k under delta_i = c_lift * delta_{i-1}^(2^d).
    pub delta_schedule: Vec<f64>,
    /// Final covering-density bound 2 e eta (D/nu_d)^k (2 pi e)^(k d / 2).
    pub density_bound: f64,
    pub mode: ParamMode,
    pub eta_negative: bool,
}

/// Iterate delta_i = c * delta_{i-1}^(2^d) for k steps starting from delta0.
///
/// Returns the k+1 values delta_0..delta_k.
pub fn delta_schedule(delta0: f64, c: f64, d: usize, k: usize) -> Vec<f64> {
    let exp = 2.0f64.powi(d as i32);
    let mut out = Vec::with_capacity(k + 1);
    out.push(delta0);
    let mut cur = delta0;
    for _ in 0..k {
        cur = c * cur.powf(exp);
        out.push(cur);
    }
    out
}

/// Assemble the pipeline parameters for dimension `n`, block dimension `d`,
/// and robust covering density `big_d`.
pub fn pipeline_params(n: usize, d: usize, big_d: f64, mode: ParamMode) -> Result<PipelineParams> {
    if d == 0 || n == 0 {
        return Err(Error::invalid("n and d must be >= 1"));
    }
    let nu = ball_volume_sqrt_d(d);
    if !(big_d > 0.0) || big_d > nu {
        return Err(Error::DensityOutOfRange {
            density: big_d,
            max: nu,
            d,
        });
    }
    let (k, eta_override) = match &mode {
        ParamMode::Asymptotic => {
            let lnn = (n as f64).ln();
            if lnn <= 0.0 {
                return Err(Error::infeasible("asymptotic mode needs n >= 2"));
            }
            let k = (lnn.log2() / d as f64 + 4.0).ceil() as usize;
            (k, None)
        }
        ParamMode::Manual { k, eta_override } => (*k, *eta_override),
    };
    if n <= k * d {
        return Err(Error::infeasible(format!(
            "need n > k*d for a nonempty initial stage (n = {n}, k*d = {})",
            k * d
        )));
    }
    let m = n - k * d;
    let initial = rogers_initial_params(m)?;
    let eta = eta_override.unwrap_or(initial.eta);
    let lift = lift_constants(d)?;
    let schedule = delta_schedule(initial.delta0_bound, lift.c_lift, d, k);
    let density_bound = 2.0 * E * eta * (big_d / nu).powi(k as i32)
        * (2.0 * PI * E).powf(0.5 * (k * d) as f64);
    Ok(PipelineParams {
        n,
        d,
        k,
        eta,
        delta0_bound: initial.delta0_bound,
        delta_schedule: schedule,
        density_bound,
        mode,
        eta_negative: eta <= 0.0,
    })
}

/// Lower bounds that any robust covering must respect in dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustLowerBounds {
    pub n: usize,
    /// nu_n / 2^n: no robust covering of R^n can be denser than this floor.
    pub nu_over_2n: f64,
    /// 0.5*log2(2*pi*e) - 1, approx 1.0471: the smallest exponent the lifting
    /// strategy could ever reach given the floor above.
    pub exponent_floor: f64,
}

impl RobustLowerBounds {
    /// Volume (2r/sqrt(n))^n of the largest parallelepiped inscribed in a
    /// radius-r ball: a cube with the ball's diameter as its diagonal.
    pub fn inscribed_cube_volume(&self, r: f64) -> f64 {
        (2.0 * r / (self.n as f64).sqrt()).powi(self.n as i32)
    }
}

/// Evaluate the robust-covering lower bounds in dimension `n`.
pub fn robust_lower_bounds(n: usize) -> Result<RobustLowerBounds> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    Ok(RobustLowerBounds {
        n,
        nu_over_2n: ball_volume_sqrt_d(n) / 2.0f64.powi(n as i32),
        exponent_floor: alpha_exponent() - 1.0,
    })
}

/// Volume of the product body: a radius-sqrt(m) ball in m = n - k*d dimensions
/// times k radius-sqrt(d) balls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductVolume {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// nu_{n-kd} * nu_d^k.
    pub volume: f64,
    /// volume / nu_n: how much of the enclosing radius-sqrt(n) ball the
    /// product occupies.
    pub ratio_to_ball: f64,
}

/// Evaluate the product-of-balls volume for the (n, k, d) block structure.
///
/// Requires 1 <= k*d and n - k*d >= 1 so the pipeline's initial stage is
/// nondegenerate.
pub fn product_volume(n: usize, k: usize, d: usize) -> Result<ProductVolume> {
    if k == 0 || d == 0 {
        return Err(Error::infeasible("need k >= 1 and d >= 1"));
    }
    if n <= k * d {
        return Err(Error::infeasible(format!(
            "need n - k*d >= 1 (n = {n}, k*d = {})",
            k * d
        )));
    }
    let m = n - k * d;
    let volume = ball_volume_sqrt_d(m) * ball_volume_sqrt_d(d).powi(k as i32);
    Ok(ProductVolume {
        n,
        k,
        d,
        volume,
        ratio_to_ball: volume / ball_volume_sqrt_d(n),
    })
}

/// Density of the hexagonal robust covering, 8 pi / (3 sqrt(3)).
pub fn hex_density() -> f64 {
    8.0 * PI / (3.0 * 3.0f64.sqrt())
}
