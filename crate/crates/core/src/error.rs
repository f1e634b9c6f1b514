use thiserror::Error;

/// Errors produced by the algebra, group and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("anisotropy parameter must be positive and finite, got {0}")]
    InvalidBeta(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis is degenerate: {0}")]
    DegenerateBasis(String),

    #[error("matrix is not in the Lie algebra (projection residual {residual:e})")]
    NotInAlgebra { residual: f64 },

    #[error("rotation angle {angle} is at or beyond the principal branch limit {limit}")]
    BranchCut { angle: f64, limit: f64 },

    #[error("group logarithm is not available for generic matrix groups")]
    LogUnsupported,

    #[error("shooting did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("a sampled curve needs at least 2 samples, got {0}")]
    InsufficientSamples(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
