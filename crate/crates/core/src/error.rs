use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("not a cover: point {point} is not covered")]
    NotACover { point: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("oracle contract violated at level {level}: {reason}")]
    OracleContract { level: usize, reason: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
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

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Input errors map to CLI exit status 2, verification failures to 1.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Malformed(_) | Error::Io { .. } | Error::Json { .. })
    }
}
