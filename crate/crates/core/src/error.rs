use thiserror::Error;

/// Errors raised by the purification toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense dimension {dim} exceeds the configured cap {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace:e}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("operator is not trace-free (trace {trace:e})")]
    NotTraceFree { trace: f64 },

    #[error("copy count {0} must be a power of two")]
    NotPowerOfTwo(usize),

    #[error("copy count {0} must be prime")]
    NotPrime(usize),

    #[error("post-selection probability {accept_prob:e} is vanishing")]
    VanishingPostSelection { accept_prob: f64 },

    #[error("dense work estimate {work} exceeds the limit {limit}")]
    WorkLimitExceeded { work: u128, limit: u128 },

    #[error("unknown gadget name `{0}`")]
    UnknownGadget(String),

    #[error("gadget {kind} does not support {copies} copies")]
    IncompatibleCopies { kind: String, copies: usize },

    #[error("output is not a depolarised state: {0}")]
    NotDepolarised(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
