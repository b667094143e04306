use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} = {requested} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("claimed margin {claimed} exceeds the true margin {actual} (witness x = {witness})")]
    MarginViolation {
        claimed: f64,
        actual: f64,
        witness: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("plan fingerprint mismatch: expected {expected}, got {found}")]
    FingerprintMismatch { expected: String, found: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn capacity(what: &'static str, requested: u64, limit: u64) -> Self {
        Error::Capacity {
            what,
            requested,
            limit,
        }
    }

    /// True for errors caused by inputs failing a semantic check rather than by malformed usage.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation(_) | Error::MarginViolation { .. } | Error::FingerprintMismatch { .. }
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
