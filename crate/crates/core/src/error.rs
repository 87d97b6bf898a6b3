use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("coset canonicalization did not terminate from element {0}")]
    NonCanonicalizable(usize),
    #[error("denominator is zero")]
    DivisionByZeroDenominator,
    #[error("exact division failed: {0}")]
    InternalDivisibilityFailure(String),
    #[error("unsuitable representation data: {0}")]
    UnsuitableData(String),
    #[error("result in component {component} is not polynomial")]
    NonIntegralResult { component: usize },
    #[error("braid extraction stuck at group element {element}: {reason}")]
    ExtractionStuck { element: usize, reason: String },
    #[error("operator is not in the span of the sigma basis")]
    NotInSpan,
    #[error("normal form coefficient at element {element}, component {component} is not polynomial")]
    NonPolynomialCoefficient { element: usize, component: usize },
    #[error("zero weight in Euler class")]
    ZeroWeight,
    #[error("Euler class vanishes")]
    ZeroEulerClass,
    #[error("dimension vector total {0} exceeds the supported bound of 6")]
    UnsupportedDimension(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("index out of range at byte {pos}: {msg}")]
    UnknownIndex { pos: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
