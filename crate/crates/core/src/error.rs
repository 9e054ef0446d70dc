//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no regular basis found: searched integer coordinates up to max-norm {bound}")]
    NoRegularBasis { bound: i64 },

    /// Exact-mode flag search certified the generic filtration dims but the
    /// bounded hunt for a small-integer witness flag came up empty. Retriable
    /// with a different seed or wider bound.
    #[error("no small-integer witness for the generic flag; certified generic dims {dims:?}")]
    FlagWitnessNotFound { dims: Vec<usize> },

    /// A defining condition of a tableau over the algebra fails, detected
    /// from the Pfaffian-system side.
    #[error("tableau condition ({condition}) fails: {detail}")]
    Condition { condition: u8, detail: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
