use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for a {size}x{size} distance matrix")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("point kind does not match the metric space ({0})")]
    DomainMismatch(&'static str),

    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("power parameter must be >= 1, got {0}")]
    InvalidPower(f64),

    #[error("k-NN graph with k={k} is disconnected ({components} components)")]
    Disconnected { k: usize, components: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("brute-force oracle limited to {limit} points, got {got}")]
    TooManyLandmarks { limit: usize, got: usize },

    #[error("feature layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
