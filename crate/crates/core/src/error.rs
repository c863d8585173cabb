use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("factor recombination exceeded {0} subset trials")]
    RecombinationLimit(u64),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not irreducible over the integers")]
    NotIrreducible,
    #[error("root index {index} out of range for a polynomial with {count} roots")]
    RootIndexOutOfRange { index: usize, count: usize },
    #[error("precision cap of {0} bits exceeded")]
    PrecisionCapExceeded(u64),
    #[error("invalid pair (p, q) = ({p}, {q}): need p > |q| > 0")]
    InvalidPair { p: i64, q: i64 },
    #[error("invalid degrees: {0}")]
    InvalidDegrees(String),
    #[error("duplicate base at terms {0} and {1}")]
    DuplicateBase(usize, usize),
    #[error("unsupported coefficient: {0}")]
    UnsupportedCoefficient(String),
    #[error("expected {expected} initial values, got {got}")]
    BadInitialCount { expected: usize, got: usize },
    #[error("floor undecided at k = {0}")]
    UndecidedFloor(u64),
    #[error("insufficient samples: need {needed} tail samples, have {have}")]
    InsufficientSamples { needed: u64, have: u64 },
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("prefix of length {len} too short for horizon {horizon}")]
    PrefixTooShort { len: usize, horizon: usize },
    #[error("no witness found in the prefix")]
    NoWitnessInPrefix,
    #[error("input word is periodic with period {0}")]
    PeriodicInput(usize),
    #[error("window {window} too large for horizon {horizon}")]
    WindowTooLarge { window: u64, horizon: u64 },
    #[error("all coefficients are zero")]
    AllZeroCoefficients,
    #[error("embedding sources have different minimal polynomials")]
    FieldMismatch,
    #[error("sequence value at k = {0} is not real")]
    NotReal(u64),
    #[error("floor-word letter at k = {0} does not fit in 64 bits")]
    LetterOverflow(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
