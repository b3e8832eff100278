use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation (shift out of range,
    /// mismatched lengths, non power-of-two transform size, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Input lists violating an ordering precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("missing shard outputs for indices {missing:?} (expected {shards} shards)")]
    MissingShards { missing: Vec<usize>, shards: usize },

    #[error("no counts row for n = {0}")]
    MissingRow(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
