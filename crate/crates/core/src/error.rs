//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid object {index}: {reason}")]
    InvalidObject { index: usize, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("input error: {0}")]
    Input(String),

    #[error("object {index} has no lowest point")]
    Unbounded { index: usize },

    #[error("spanner edge ({0}, {1}) is not an edge of the graph")]
    StructuralViolation(u32, u32),

    #[error("coincident points persist after jitter retries")]
    DuplicatePoints,

    #[error("cell refinement did not converge: {0}")]
    RefinementFailed(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
