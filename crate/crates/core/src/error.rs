//! Error type shared across the crate.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown suite `{name}`; available suites: {}", available.join(", "))]
    UnknownSuite {
        name: String,
        available: Vec<String>,
    },

    #[error("problem `{problem}` expects dimension {expected}, got {got}")]
    DimensionMismatch {
        problem: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameter configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter space: {0}")]
    InvalidSpace(String),

    #[error("invalid window [{lo}, {hi}]: {reason}")]
    InvalidWindow { lo: f64, hi: f64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("objective failed at the starting configuration: {0}")]
    StartFailed(String),

    #[error("session file `{0}` already exists; pass force to overwrite")]
    SessionExists(PathBuf),

    #[error("malformed trace data: {0}")]
    TraceFormat(String),

    #[error("malformed session data: {0}")]
    SessionFormat(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
