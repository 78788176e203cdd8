use thiserror::Error;

/// Errors produced by the `ringseq` library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("exponent e = {0} must be at least 2")]
    ExponentTooSmall(u32),
    #[error("p^e = {p}^{e} does not fit the 32-bit residue width")]
    ModulusOverflow { p: u64, e: u32 },
    #[error("digit {digit} at position {position} is outside [0, {p})")]
    DigitOutOfRange { position: usize, digit: u64, p: u64 },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{m} does not divide p - 1 = {p_minus_1}")]
    NotDivisorOfPMinusOne { m: u64, p_minus_1: u64 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial degree {0} is below the minimum of 2")]
    DegreeTooSmall(usize),
    #[error("polynomial is reducible modulo p")]
    ReducibleModP,
    #[error("element is not a unit")]
    NotUnit,
    #[error("coefficient {0} is not divisible by p")]
    NotDivisibleByP(u64),
    #[error("polynomial is not primitive")]
    NotPrimitive,
    #[error("polynomial is not strongly primitive")]
    NotStronglyPrimitive,
    #[error("hypothesis not met: delta_bar^2 lies in the prime field")]
    DeltaSquareInPrimeField,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid hypothesis `{name}`: {detail}")]
    Hypothesis { name: &'static str, detail: String },
    #[error("ring mismatch: map over Z/{map}, sequence over Z/{seq}")]
    RingMismatch { map: u64, seq: u64 },
    #[error("alpha and beta coincide")]
    DegeneratePair,
    #[error("map is entropy-preserving; no failure to classify")]
    MapIsInjective,
    #[error("enumeration of {needed} items exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("no qualifying polynomial found")]
    NotFound,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
