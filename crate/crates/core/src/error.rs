use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("scalars belong to different rings (p = {left} and p = {right})")]
    RingMismatch { left: u32, right: u32 },

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("matrix is singular")]
    Singular,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector is not in the span: {0}")]
    NotInSpan(String),

    #[error("subspace is not invariant: {0}")]
    NotInvariant(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

/// Validates the deformation parameter; the construction needs p >= 3.
pub(crate) fn check_p(p: u32) -> Result<()> {
    if p < 3 {
        return Err(Error::InvalidParameter(format!("p must be at least 3, got {p}")));
    }
    Ok(())
}
