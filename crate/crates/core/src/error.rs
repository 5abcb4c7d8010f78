use thiserror::Error;

/// Failures raised by the library.
///
/// `Domain` means an input violated an operation's precondition. `Consistency`
/// means two independent computations disagreed, which indicates either a bug
/// or a counterexample to one of the identities being checked.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn consistency<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Consistency(msg.into()))
}
