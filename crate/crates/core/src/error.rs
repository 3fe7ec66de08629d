use thiserror::Error;

/// Errors raised by the field and scattering computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested evaluation lies outside the range where the numerical
    /// scheme is known to be converged.
    #[error("accuracy: {0}")]
    Accuracy(String),

    #[error("degenerate beam: {0}")]
    DegenerateBeam(String),

    /// The quantity is mathematically undefined at the requested point.
    #[error("outside domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
