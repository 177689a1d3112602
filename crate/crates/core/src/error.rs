//! Shared error type for all covering operations.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("basis is numerically singular: |det| = {det:.3e} is below tolerance {tol:.3e}")]
    SingularBasis { det: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("enumeration budget exceeded: visited {visited} candidates (cap {cap})")]
    EnumerationBudgetExceeded { visited: usize, cap: usize },

    #[error("grid too coarse: bracket [{lo:.6}, {hi:.6}] exceeds ratio bound {ratio_bound}")]
    GridTooCoarse { lo: f64, hi: f64, ratio_bound: f64 },

    #[error("density {density:.6} out of range: must satisfy 0 < density <= {max:.6} (d = {d})")]
    DensityOutOfRange { density: f64, max: f64, d: usize },

    #[error("infeasible dimensions: {msg}")]
    InfeasibleDimensions { msg: String },

    #[error("bisection stalled at bracket [{lo:.9}, {hi:.9}]: grid refinement hit budget")]
    BisectionStalled { lo: f64, hi: f64 },

    #[error("unknown built-in covering name {0:?}; expected \"hex\" or \"cube(D)\"")]
    UnknownName(String),

    #[error("not a lattice point: basis coefficients {coeffs:?} deviate from integers by {deviation:.3e}")]
    NotALatticePoint { coeffs: Vec<f64>, deviation: f64 },

    #[error("matrix is not unimodular: integer determinant is {0}")]
    NotUnimodular(i128),

    #[error("max tries exceeded after {tries} attempts (best CI upper bound seen: {best_upper:?})")]
    MaxTriesExceeded { tries: usize, best_upper: Option<f64> },

    #[error("coverage check failed: uncovered point found at {witness:?}")]
    CoverageCheckFailed { witness: Vec<f64> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed file {path}: {msg}")]
    MalformedFile { path: String, msg: String },
}

impl Error {
    pub fn infeasible(msg: impl Into<String>) -> Self {
        Error::InfeasibleDimensions { msg: msg.into() }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
