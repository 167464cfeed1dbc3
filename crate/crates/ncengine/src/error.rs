use thiserror::Error;

/// Errors shared across the spectrum, thermodynamics, and cycle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    /// 4·c1·c2 ≤ c3²: the normal-mode stiffness K would be zero or imaginary.
    #[error("degenerate coupling: 4*c1*c2 = {lhs} <= c3^2 = {rhs}")]
    DegenerateCoupling { lhs: f64, rhs: f64 },

    /// A mode frequency came out non-positive, so no bounded thermal state exists.
    #[error("non-positive mode frequency f = {frequency} ({context})")]
    NegativeModeFrequency { frequency: f64, context: &'static str },

    /// The closed-form partition function was evaluated outside its stated
    /// validity condition.
    #[error("domain condition violated for {context}: {detail}")]
    DomainConditionViolated { context: &'static str, detail: String },

    /// The printed closed form evaluated to a non-positive partition function.
    #[error("closed-form partition function is non-positive: Z = {value}")]
    NonPositivePartition { value: f64 },

    /// The brute-force cutoff leaves a tail larger than the requested tolerance.
    #[error("cutoff too small: tail bound {tail_bound} exceeds tolerance {tolerance}")]
    CutoffTooSmall { tail_bound: f64, tolerance: f64 },

    /// Heat input is non-positive, so efficiency is undefined.
    #[error("non-positive heat input {heat_in}: efficiency undefined")]
    ZeroHeatInput { heat_in: f64 },

    /// A constructor precondition failed.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
