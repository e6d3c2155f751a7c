use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertex list must be nonempty")]
    EmptyVertices,

    #[error("unsupported dimension {0}: this build is exact for d in {{1, 2}}")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("level {level} out of range (max {max})")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("value missing for node `{0}`")]
    MissingNode(String),

    #[error("input is not a martingale: residual {residual:.3e} exceeds {tol:.3e}")]
    NotMartingale { residual: f64, tol: f64 },

    #[error("enumeration needs {needed} selections, cap is {cap}")]
    EnumerationCap { needed: u128, cap: u64 },

    #[error("Picard iteration did not converge: distance {distance:.3e} after {iterations} iterations")]
    NonConvergence { iterations: usize, distance: f64 },

    #[error("invalid convex body: {0}")]
    InvalidBody(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
