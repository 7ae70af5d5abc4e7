use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series failed to converge after {terms} terms")]
    Convergence { terms: usize },

    #[error("invalid H-function parameters: {0}")]
    Param(String),

    #[error("argument outside the convergence region: {0}")]
    Region(String),

    #[error("no convergent representation: {0}")]
    Unsupported(String),

    #[error("quadrature did not reach tolerance: {0}")]
    Quadrature(String),

    #[error("vanishing denominator: {0}")]
    Singularity(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
