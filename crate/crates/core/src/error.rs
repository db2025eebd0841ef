use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller handed in something malformed (out-of-range vertex,
    /// mismatched arity, invalid path, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A declared precondition does not hold (e.g. the graph is not
    /// d-path-dominant and the check was not waived).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An enumeration or search exceeded its budget. Always explicit,
    /// never a silent truncation.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// An internal consistency assertion failed. This indicates a bug:
    /// the guarantees the implementation relies on did not hold.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A requested witness or label could not be found.
    #[error("not found: {0}")]
    NotFound(String),

    /// Text input failed to parse; positions are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
