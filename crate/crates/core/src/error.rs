//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("degenerate cell ({row}, {col}): {detail}")]
    DegenerateCell { row: usize, col: usize, detail: String },

    #[error("invalid patch tiling: {0}")]
    InvalidTiling(String),

    #[error("seam mismatch: {0}")]
    SeamMismatch(String),

    #[error("non-manifold mesh: {0}")]
    NonManifold(String),

    #[error("degenerate derivative: {0}")]
    DegenerateDerivative(String),

    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    #[error("degenerate edge: {0}")]
    DegenerateEdge(String),

    #[error("singular parametrization: {0}")]
    SingularParametrization(String),

    #[error("singular metric: {0}")]
    SingularMetric(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("point count mismatch: expected {expected}, got {got}")]
    CountMismatch { expected: usize, got: usize },

    #[error("closedness mismatch: {0}")]
    ClosednessMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("at subdivision level {level}: {source}")]
    AtLevel { level: usize, source: Box<Error> },
}

impl Error {
    /// Wrap an error with the subdivision level it occurred at.
    pub fn at_level(self, level: usize) -> Error {
        Error::AtLevel { level, source: Box::new(self) }
    }
}
