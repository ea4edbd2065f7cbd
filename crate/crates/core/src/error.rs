use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("matrix logarithm undefined: {0}")]
    LogUndefined(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Resource and usage problems, as opposed to numerical or mathematical failures.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget(_) | Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
