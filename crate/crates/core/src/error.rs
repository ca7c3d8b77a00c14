use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters or inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller broke an operation's precondition (bad index, length mismatch, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed edge-list input. `line` is 1-based.
    #[error("edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    /// JSON syntax error in a configuration document.
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Whether this error stems from file-system or stream I/O.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
