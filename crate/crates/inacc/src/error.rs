use thiserror::Error;

/// Errors produced by distribution construction, window validation and
/// measure evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation received an invalid parameter.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// The requested evaluation point or window lies outside the valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The measure does not exist as a finite number (e.g. the assigned
    /// density vanishes where the actual density has mass).
    #[error("divergent measure: {0}")]
    Divergence(String),

    /// An integrand produced NaN or ±inf at an interior abscissa.
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },
}

impl Error {
    pub fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn domain(reason: impl Into<String>) -> Self {
        Error::Domain(reason.into())
    }

    pub fn divergence(reason: impl Into<String>) -> Self {
        Error::Divergence(reason.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
