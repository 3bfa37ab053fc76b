use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes:
/// presentation problems exit with 2, configuration problems with 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime")]
    NotPrime(u64),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("arithmetic fault: {0}")]
    Arithmetic(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by a bad presentation (as opposed to a bad
    /// request or configuration).
    pub fn is_presentation_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidPresentation(_) | Error::Json(_) | Error::Malformed(_) | Error::InvalidFiltration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
