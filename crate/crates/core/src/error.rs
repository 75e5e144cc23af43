use thiserror::Error;

/// Errors raised by the library. Diagnostics that are part of a normal
/// answer (validation reports, verdicts) are returned as values instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("set {0} is not a member of the family")]
    NotInFamily(String),
    #[error("no filter exists on the empty bound")]
    NoFilter,
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
