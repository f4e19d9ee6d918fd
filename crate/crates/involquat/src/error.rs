use thiserror::Error;

/// Errors reported by the algebra operations.
///
/// `PreconditionViolated` carries the name of the hypothesis that failed, so
/// callers can see which relation or dimension count broke.
/// `InvariantViolated` means a construction produced output that failed its
/// own certification; it indicates a bug, not bad input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("field carries no order-2 automorphism")]
    NoAutomorphism,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("modulus polynomial is not irreducible")]
    ReducibleModulus,
    #[error("matrix size mismatch")]
    SizeMismatch,
    #[error("element is not square-central: u^2 != lambda^2")]
    NotSquareCentral,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("idempotent is not metabolic")]
    NotMetabolic,
    #[error("idempotent is not hyperbolic")]
    NotHyperbolic,
    #[error("element lies in the scalars F*1")]
    ScalarInput,
    #[error("element is not symmetric under the involution")]
    NotSymmetric,
    #[error("square of the element is not central")]
    SquareNotCentral,
    #[error("exceptional case: {0}")]
    ExceptionalCase(&'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("field too large for exhaustive search")]
    FieldTooLarge,
    #[error("instance kind {kind} is infeasible for this algebra: {reason}")]
    Infeasible { kind: String, reason: String },
    #[error("invalid descriptor: {0}")]
    BadDescriptor(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
