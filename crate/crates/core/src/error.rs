use thiserror::Error;

use crate::algebra::Param;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not an integer part: {0:?}")]
    BadToken(String),
    #[error("parts must be positive: {0:?}")]
    NonPositivePart(String),
    #[error("comma form must be weakly decreasing, found {0:?}")]
    NotDecreasing(String),
    #[error("malformed multiplicity clause: {0:?}")]
    BadMultiplicity(String),
    #[error("not a rational number: {0:?}")]
    BadRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parameter mismatch: {0} vs {1}")]
    ParamMismatch(Param, Param),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular q-shifted factorial: a factor vanishes")]
    Singular,
    #[error("infinite product needs a truncation order and a positive power of z in its argument")]
    NeedsTruncation,
    #[error("exact division left a nonzero remainder")]
    InexactDivision,
    #[error("value is not a constant: {0}")]
    NotConstant(String),
    #[error("{0}")]
    Dimension(String),
}

/// A brute-force computation would exceed a configured bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("resource bound exceeded: {bound} = {limit} (needed {needed})")]
pub struct ResourceError {
    pub bound: &'static str,
    pub limit: u64,
    pub needed: u64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("exact mode needs an integral u, got {0}")]
    NonIntegralU(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
