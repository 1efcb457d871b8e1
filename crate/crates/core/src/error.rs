//! Crate-wide error type.

use crate::kind::Kind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator count mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    #[error("element is not invertible")]
    NotInvertible,

    #[error("degenerate point configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a group member: {0}")]
    NotMember(String),

    #[error("ambiguous classification between {0} and {1} (margin {2:.3e})")]
    AmbiguousClass(Kind, Kind, f64),

    #[error("element has no boundary fixed point")]
    NoBoundaryFixedPoint,

    #[error("Lorentz reconstruction failed after {0} frames")]
    ReconstructionFailed(usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid Heisenberg translation: {0}")]
    InvalidTranslation(String),

    #[error("Hermitian form mismatch: expected {0}, got {1}")]
    FormMismatch(String, String),

    #[error("{0} is not a right eigenvalue")]
    NotInSpectrum(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn precondition(clause: impl Into<String>) -> Self {
        Error::PreconditionFailed(clause.into())
    }

    /// Exit code the CLI maps this error to (2 = malformed input,
    /// 3 = precondition failure).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PreconditionFailed(_)
            | Error::DegenerateConfiguration(_)
            | Error::InvalidTranslation(_)
            | Error::NoBoundaryFixedPoint => 3,
            _ => 2,
        }
    }
}
