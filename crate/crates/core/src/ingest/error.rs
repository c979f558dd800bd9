use thiserror::Error;

use super::types::H256;

/// Schema violation in a fixture file, located by line and JSON field path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {path}: {message}")]
pub struct FixtureError {
    pub line: usize,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum IngestError {
    /// Network or server-side hiccup; the request may be retried.
    #[error("transient failure: {0}")]
    Transient(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("inconsistent record: {0}")]
    InconsistentRecord(String),

    #[error("malformed log {log_index} in {tx_hash}: {reason}")]
    MalformedLog {
        tx_hash: H256,
        log_index: u64,
        reason: String,
    },

    #[error("fixture error: {0}")]
    Fixture(#[from] FixtureError),

    /// The endpoint answered, but not with something we understand.
    #[error("rpc error: {0}")]
    Rpc(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl IngestError {
    pub fn is_transient(&self) -> bool {
        matches!(self, IngestError::Transient(_))
    }
}
