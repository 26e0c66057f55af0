use std::fmt;

use thiserror::Error;

/// Structural requirement that an input graph failed to meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precondition {
    NotConnected,
    NotChordal,
    HasK4,
}

impl Precondition {
    /// Stable machine-readable reason string.
    pub fn as_str(self) -> &'static str {
        match self {
            Precondition::NotConnected => "not_connected",
            Precondition::NotChordal => "not_chordal",
            Precondition::HasK4 => "has_k4",
        }
    }
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("precondition failed: {0}")]
    Precondition(Precondition),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn argument(message: impl Into<String>) -> Self {
        Error::Argument(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
