use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol {symbol:?} is not in the alphabet")]
    UnknownSymbol { symbol: char },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    /// Well-formed input that violates a domain invariant.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by data that parsed but failed a check.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_))
    }
}
