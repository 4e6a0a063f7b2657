use alloc::string::String;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet chaining mismatch: outer jet based at {outer_base}, inner value {inner_value}")]
    ChainMismatch { outer_base: f64, inner_value: f64 },
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("jet base point mismatch: {left} vs {right}")]
    BasePointMismatch { left: f64, right: f64 },
    #[error("jet order {0} exceeds the supported maximum")]
    OrderTooLarge(usize),
    #[error("critical point at {x}: derivative {derivative} is below the floor")]
    CriticalPoint { x: f64, derivative: f64 },
    #[error("translation by zero is the identity symbol")]
    IdentitySymbol,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown symbol label `{0}`")]
    UnknownSymbol(String),
    #[error("unknown weight `{0}`")]
    UnknownWeight(String),
    #[error("infeasible monotone extension: {0}")]
    InfeasibleExtension(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("value {0} is outside the range of the symbol iterate")]
    OutOfRange(f64),
    #[error("no truncation radius below {max_range} achieves tail bound {tail_tol}")]
    UnboundedTail { max_range: f64, tail_tol: f64 },
    #[error("rapid decay validation failed at n = {n}, x = {x}")]
    DecayValidation { n: u32, x: f64 },
    #[error("Abel seed infeasible: {0}")]
    SeedInfeasible(String),
    #[error("no admissible schedule step found below k_cap = {k_cap}")]
    ScheduleInfeasible { k_cap: u64 },
    #[error("schedule corrupt: {0}")]
    ScheduleCorrupt(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

pub type Result<T> = core::result::Result<T, Error>;
