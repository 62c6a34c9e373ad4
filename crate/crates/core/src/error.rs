use thiserror::Error;

use crate::qcalc::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division is not exact in the Laurent ring")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot evaluate a polynomial with negative exponents at q = 0")]
    ZeroEvaluationPoint,
    #[error("index out of range: k = {k} exceeds n = {n}")]
    OutOfRange { n: u64, k: u64 },
    #[error("state {k} lies outside the support {{0, ..., {n}}} at time {n}")]
    OutOfSupport { n: u64, k: u64 },
    #[error("q must be a positive rational, got {0}")]
    NonPositiveQ(Rational),
    #[error(
        "jump coefficient {jump} of state {state} evaluates to {value}, which is not positive"
    )]
    NonPositiveCoefficient {
        state: u64,
        jump: u32,
        value: Rational,
    },
    #[error("failure probability at state {state} is {value}; it must lie in [0, 1)")]
    InvalidAlpha { state: u64, value: Rational },
    #[error("alpha table has {len} entries; state {state} was requested")]
    AlphaTableExhausted { state: u64, len: usize },
    #[error("compensator is not strictly increasing: alpha({state}) = 0")]
    NotInvertible { state: u64 },
    #[error("compensator is bounded by {sup}; no largest x has h(x) <= {value}")]
    InverseUnbounded {
        sup: Box<Rational>,
        value: Box<Rational>,
    },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}
