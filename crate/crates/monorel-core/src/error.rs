//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("relation is not monotone")]
    NotMonotone,

    #[error("relation is not maximal monotone")]
    NotMaximal,

    #[error("<x, Ax> is not single-valued at the queried point")]
    NotSingleValued,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("unknown suite `{name}`; valid suites: {known}")]
    UnknownSuite { name: String, known: String },
}
