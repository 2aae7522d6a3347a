use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("matrix is not shift-invertible (E block is singular)")]
    NotShiftInvertible,

    #[error("point is not on the sampling grid: {0}")]
    OffGrid(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("window function is zero")]
    ZeroWindow,

    #[error("unsupported tau {0} for this grid")]
    UnsupportedTau(f64),

    #[error("generator decomposition failed: {0}")]
    Decomposition(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
