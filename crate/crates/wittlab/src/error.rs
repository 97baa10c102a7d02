//! Error type shared by the whole library.

use thiserror::Error;

/// Errors produced by exact arithmetic and the checkers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    ParentMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("factorization is only available over finite coefficient fields")]
    UnsupportedField,
    #[error("truncation lengths differ")]
    LengthMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("leading coefficient is zero")]
    LeadingCoefficientZero,
    #[error("divisor touches {{0}} or {{infinity}}")]
    BoundaryContact,
    #[error("factored form required: factorization over this field is unavailable")]
    FactorizationUnavailable,
    #[error("inseparable extension: the modulus has vanishing derivative")]
    InseparableExtension,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("symbol has too few slots for this construction")]
    SlotArity,
    #[error("diagonal restriction is undefined at zero")]
    ZeroDiagonal,
    #[error("projection formula is only defined for additive slots")]
    UnsupportedSlot,
    #[error("the zero function has no local expansion")]
    ZeroFunction,
    #[error("place is inseparable; residue-field traces are unavailable")]
    InseparablePlace,
    #[error("local expansion precision exhausted")]
    PrecisionExhausted,
    #[error("polynomial is not monic in the fiber coordinate")]
    NotMonic,
    #[error("presentation too large: {0}")]
    TooLarge(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("divisor data must be supplied in factored form over this field")]
    UnfactoredDivisor,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
