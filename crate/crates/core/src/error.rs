use thiserror::Error;

/// Errors produced by circuit construction, simulation and the classical helpers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("circuit contains non-unitary gate `{0}` and cannot be inverted")]
    InversionUnsupported(String),
    #[error("expected a {expected} gate, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: String,
    },
    #[error("divisor {d} is outside (0, 2^{n})")]
    InvalidDivisor { d: u128, n: u32 },
    #[error("dividend {z} does not give a quotient below 2^{n} for divisor {d}")]
    QuotientOverflow { z: u128, d: u128, n: u32 },
    #[error("{a} has no inverse modulo {modulus}")]
    NoInverse { a: u128, modulus: u128 },
    #[error("constant {a} must satisfy 0 < a < {modulus}")]
    InvalidConstant { a: u128, modulus: u128 },
    #[error("approximation cutoff {cutoff} invalid for width {width}")]
    InvalidCutoff { cutoff: u32, width: usize },
    #[error("qubit {0} is used by more than one operand")]
    RegisterOverlap(usize),
    #[error("circuit width {width} exceeds dense simulator cap {cap}")]
    TooWide { width: usize, cap: usize },
    #[error("gate {index} ({gate}) leaves the product-state family: {reason}")]
    EntanglementViolation {
        index: usize,
        gate: String,
        reason: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
