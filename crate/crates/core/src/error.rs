use thiserror::Error;

use crate::value::Value;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An algebra, instance or file is malformed independent of any law.
    #[error("specification error: {0}")]
    Spec(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    /// A message function produced a value outside the receiver's message monoid.
    #[error("type fault on edge {edge}: {value} is not a message of the receiver")]
    TypeFault { edge: u32, value: Value },

    #[error("configuration fault: {0}")]
    Configuration(String),

    /// A policy selected an event that is not pending or not eligible.
    #[error("scheduling fault: {0}")]
    Scheduling(String),

    #[error("unknown registry name `{0}`")]
    UnknownName(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
