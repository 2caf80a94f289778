use thiserror::Error;

/// Errors raised by the library. The CLI maps them to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad identifiers, unparsable numbers, missing entries.
    #[error("input error: {0}")]
    Input(String),
    /// A structural precondition of an algorithm does not hold.
    #[error("property error: {0}")]
    Property(String),
    /// The clearing function hits 0/0 on a CDS-only debtor without assets.
    #[error("degenerate network: {0}")]
    Degenerate(String),
    /// The instance exceeds a hard size limit.
    #[error("size error: {0}")]
    Size(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn property<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Property(msg.into()))
}
