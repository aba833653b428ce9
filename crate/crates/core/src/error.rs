use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed permutation `{input}`: {reason}")]
    MalformedPermutation { input: String, reason: String },

    #[error("rank {0} is outside the supported range 1..={max}", max = crate::weyl::MAX_RANK)]
    RankOutOfRange(usize),

    #[error("a permutation of rank 1 has no reduction")]
    NoReduction,

    #[error("({a},{b}) is not a free variable of this Weyl element")]
    NotFree { a: usize, b: usize },

    #[error("division by the zero rational function")]
    ZeroDivisor,

    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,

    #[error("assignment does not cover variable {0}")]
    UnassignedVariable(String),

    #[error("invalid endpoints: {0}")]
    InvalidEndpoint(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("degenerate decomposition: {0}")]
    DegenerateDecomposition(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("integral diverges for mu = {0}; need Re(mu) > 1/2")]
    DivergentRegion(String),

    #[error("regularization depth {k} is insufficient for mu = {mu}; need Re(mu) > (1-k)/2")]
    InsufficientRegularization { k: usize, mu: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
