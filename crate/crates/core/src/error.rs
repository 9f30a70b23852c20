use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("load error in {path}: row {row}: {message}")]
    Load {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("scope error: {0}")]
    Scope(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("plan error: {0}")]
    Plan(String),

    #[error("transformation error: {0}")]
    Transform(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("strategy not applicable: {0}")]
    Inapplicable(String),

    #[error("generator error: {0}")]
    Generator(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
