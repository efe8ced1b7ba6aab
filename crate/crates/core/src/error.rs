use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("monomial {index} has total degree {found}, expected {expected}")]
    NotHomogeneous {
        index: usize,
        found: u32,
        expected: u32,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial degree {0} exceeds 2")]
    DegreeTooHigh(u32),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Sphere cells were flagged as possibly containing a critical point but
    /// the Newton refinement failed to settle there.
    #[error("Newton refinement did not converge in {} flagged cell(s)", .cells.len())]
    NonConvergence { cells: Vec<Vec<f64>> },

    #[error("the critical-point hypothesis fails at {} point(s)", .points.len())]
    AssumptionFailed { points: Vec<Vec<f64>> },

    #[error("Tr_- + min|grad V| vanishes; the lower bound hypothesis is violated")]
    HypothesisViolated,

    #[error("state support violates the required region: {0}")]
    SupportViolation(String),

    #[error("partition degenerates: {0}")]
    DegeneratePartition(String),

    #[error("iteration stagnated after {iterations} steps (residual {residual:e})")]
    Breakdown { iterations: usize, residual: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("no admissible constant up to C_max = {c_max:e} (most negative eigenvalue {min_eigenvalue:e})")]
    NotFound { c_max: f64, min_eigenvalue: f64 },
}
