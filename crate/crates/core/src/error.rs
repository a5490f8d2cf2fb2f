use std::path::PathBuf;

/// Errors produced anywhere in the optimizer pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value violated a domain invariant.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// The corridor or sweep definition cannot produce a usable model.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("market share {0} is outside the open interval (0, 1)")]
    ShareDomain(f64),

    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),

    #[error("solver backend `{backend}` failed: {message}")]
    Backend { backend: String, message: String },

    /// A file could not be parsed; `message` names the offending field or row.
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
