use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Guard and resource errors are distinct variants so that batch runners can
/// record a skipped computation instead of aborting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },

    #[error("guard exceeded: {0}")]
    Guard(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("condition (A) fails: {0}")]
    ConditionAFails(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by a size guard or resource cap rather than by
    /// the input itself.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Guard(_) | Error::ResourceLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
