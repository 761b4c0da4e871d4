use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the filtering library and CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format for {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("invalid challenge spec: {0}")]
    Spec(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("edge mask contains no pixel pairs")]
    EmptyMask,

    #[error("degenerate kernel weight sum {0:e}; window does not cover any usable pixel")]
    DegenerateWeight(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
