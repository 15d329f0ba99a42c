//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("bad dimension: expected {expected}, got {got}")]
    BadDim { expected: usize, got: usize },

    #[error("helicity must be +1 or -1, got {0}")]
    BadLambda(i32),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("weight must lie in [0, 1], got {0}")]
    BadWeight(f64),

    #[error("basis sets must have equal size in 1..=3, got {a} and {b}")]
    SizeMismatch { a: usize, b: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("SIC subset size must lie in 1..=4, got {0}")]
    BadCount(usize),

    #[error("invalid state: {0}")]
    BadState(String),

    #[error("invalid direction: {0}")]
    BadDirection(String),

    #[error("bad state spec `{0}`: {1}")]
    BadSpec(String, String),

    #[error("bad run configuration: {0}")]
    BadConfig(String),

    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),
}

pub type Result<T> = std::result::Result<T, Error>;
