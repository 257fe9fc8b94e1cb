use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("undefined input: {0}")]
    UndefinedInput(&'static str),
    #[error("parameter out of range: {0}")]
    OutOfRange(&'static str),
    #[error("unsupported for this norm: {0}")]
    Unsupported(&'static str),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> crate::Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch { expected, got })
    }
}
