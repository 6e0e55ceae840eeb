use thiserror::Error;

/// Errors raised by the spectral engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: wrong lengths, non-finite entries, empty brackets.
    #[error("invalid input: {0}")]
    Input(String),

    /// An argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range {lo}..={hi}")]
    Index { index: i64, lo: i64, hi: i64 },

    /// The conformal density vanished or a matrix that must be positive
    /// definite was not.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    /// A numerical procedure failed to reach the requested accuracy.
    #[error("accuracy not reached: {0}")]
    Accuracy(String),

    /// Requested data that the object was not built with.
    #[error("invalid state: {0}")]
    State(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
