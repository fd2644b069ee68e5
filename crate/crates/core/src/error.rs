use thiserror::Error;

/// Errors raised anywhere in the analytic pipeline or the Fock-space oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("{func}: argument {re}{im:+}i lies on the cut [-2, 2]")]
    OnCut { func: &'static str, re: f64, im: f64 },

    #[error("{func}: argument {value} is outside [-2, 2]")]
    OffInterval { func: &'static str, value: f64 },

    #[error("invalid extrapolation schedule: {0}")]
    InvalidSchedule(String),

    #[error("boundary limit did not converge at t0 = {t0}: successive extrapolants differ by {estimate:e} (tolerance {tolerance:e})")]
    NonConvergent { t0: f64, estimate: f64, tolerance: f64 },

    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),

    #[error("truncation depth {depth} is outside the admissible range")]
    InvalidDepth { depth: usize },

    #[error("request needs words of length {needed} but the safe zone at depth {depth} ends at {limit}")]
    OutsideSafeZone { needed: usize, depth: usize, limit: usize },

    #[error("resolvent solve failed at {re}{im:+}i: {reason}")]
    SingularSolve { re: f64, im: f64, reason: String },

    #[error("v1 and v2 are linearly dependent")]
    LinearlyDependent,

    #[error("operation requires a non-normal configuration (Im alpha != 0)")]
    Normal,

    #[error("operation requires norm1 = 1, got {0}")]
    NotNormalized(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
