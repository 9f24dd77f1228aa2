use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid domain parameters: {0}")]
    InvalidParameters(String),

    #[error("unsupported operation for {variant}: {what}")]
    Unsupported { variant: String, what: String },

    #[error("domain {0} is unbounded")]
    Unbounded(String),

    #[error("multi-index {alpha:?} is not square-integrable on {variant}")]
    Inadmissible { variant: String, alpha: Vec<i32> },

    #[error(
        "quadrature did not reach relative tolerance {tol:e} (estimated {achieved:e}) within {intervals} intervals"
    )]
    QuadratureFailed { tol: f64, achieved: f64, intervals: usize },

    #[error("point lies outside the domain")]
    PointOutside,

    #[error("budget {budget} exceeds table degree cap {cap}")]
    BudgetExceedsCap { budget: usize, cap: usize },

    #[error("kernel vanishes on the diagonal at this point")]
    DiagonalZero,

    #[error("kernel vanishes at (z, a); representative coordinates are undefined")]
    KernelZero,

    #[error("point lies on the branch locus of the map")]
    BranchLocus,

    #[error("contour evaluation inconclusive: {0}")]
    Inconclusive(String),

    #[error("corrupt moment cache file: {0}")]
    CorruptCache(String),

    #[error("moment cache domain hash {found} does not match requested {expected}")]
    HashMismatch { expected: String, found: String },

    #[error("moment cache format version {found} is not supported (expected {expected})")]
    VersionMismatch { expected: u32, found: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
