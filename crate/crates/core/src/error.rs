use thiserror::Error;

/// Errors raised by evaluation, quadrature and configuration code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configuration value is malformed or unsupported.
    #[error("configuration error: {0}")]
    Config(String),
    /// An integrand produced a non-finite value at a quadrature node.
    #[error("non-finite integrand value {value} at {location}")]
    Evaluation { location: String, value: f64 },
    /// A weight could not be rescaled onto its constraint surface.
    #[error("normalization error: {0}")]
    Normalization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
