use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants map onto the command-line exit codes: [`Error::Capacity`] is 3,
/// everything else that is not I/O related is a usage-class failure (2).
#[derive(Debug, Error)]
pub enum Error {
    /// Caller violated an API precondition (shape mismatch, bad index set, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// Mathematically undefined request, such as inverting zero.
    #[error("domain error: {0}")]
    Domain(String),
    /// Code parameters outside the supported family.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The request does not fit the field, budget, or representation limits.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// A modulus was expected to be irreducible but has a factor.
    #[error("reducible polynomial: has a factor of degree {factor_degree}")]
    Reducible { factor_degree: usize },
    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
