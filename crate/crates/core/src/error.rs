use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0} (supported: 1..=12)")]
    UnsupportedDimension(usize),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("order mismatch: ord(A) = {a}, ord(B) = {b}")]
    OrderMismatch { a: u64, b: u64 },

    #[error("no identity power found within bound {bound}")]
    OrderBoundExceeded { bound: u64 },

    #[error("function has algebraic degree {0}, expected at most 2")]
    NotQuadratic(u32),

    #[error("matrix is not extendable")]
    NotExtendable,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
