use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto exit codes
/// (domain/parse -> 2, cap -> 3, verification -> 4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
