use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Text input (observable lines, schedule files) that cannot be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A precondition on an argument does not hold.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two Pauli strings of different lengths were combined.
    #[error("length mismatch: expected {expected} qubits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// An instance exceeds a solver or reference-path guard.
    #[error("instance too large: {what} is {got}, limit {limit}")]
    InstanceTooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// A schedule failed validation where a valid one was required.
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("schedule file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
