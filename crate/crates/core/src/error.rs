//! Error types shared across the crate.

/// Errors produced by grid construction, Fock-space operations and checks.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its validity range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A truncation guard refused an operation that would leak
    /// significant amplitude past the occupation cutoff.
    #[error("truncation guard violated: {0}")]
    Guard(String),

    /// Operands with incompatible dimensions.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    /// A structural contract on the input data does not hold
    /// (e.g. a field-strength sampler that is not antisymmetric).
    #[error("contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }
}
