use thiserror::Error;

use crate::lp::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational literal {0:?}")]
    ParseRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("coincident sites have no bisector")]
    CoincidentSites,
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("iteration cap of {0} exceeded")]
    IterationCap(u64),
    #[error("linear program is {0:?}")]
    NotOptimal(LpStatus),
    #[error("pricing returned column {0} which is already present")]
    RepeatedColumn(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
}
