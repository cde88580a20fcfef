use thiserror::Error;

/// Errors raised across the library.
///
/// The variants are grouped loosely by the kind of failure so that callers
/// (the CLI in particular) can map them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input data is structurally unusable (empty, ragged, asymmetric...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Not enough observations for the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A linear system or iteration could not be solved.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Parse error in one of the text formats, with a 1-based line number.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: u64,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid_param(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn invalid_input(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
