use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("document body is empty")]
    EmptyDocument,

    #[error("document `{doc_id}` has no candidate keywords")]
    NoCandidates { doc_id: String },

    #[error("document `{doc_id}` produced a graph without edges")]
    EmptyGraph { doc_id: String },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("cannot balance dataset: {0}")]
    Balancing(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("unsupported model format version {found} (expected {expected})")]
    UnsupportedVersion { found: u64, expected: u64 },

    #[error("model checksum mismatch: file is corrupt or was edited")]
    Checksum,

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

/// Coarse failure class, used by the command line to choose an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Training,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParams(_) => ErrorKind::Usage,
            Error::Balancing(_) | Error::Training(_) => ErrorKind::Training,
            _ => ErrorKind::Data,
        }
    }
}
