use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid range [{lo}, {hi}]: {reason}")]
    InvalidRange {
        lo: u64,
        hi: u64,
        reason: &'static str,
    },

    /// An allocation or iteration count exceeds the configured ceiling.
    #[error("capacity exceeded: {what} needs {required}, limit is {limit}")]
    Capacity {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("no hard-coded cycle for p = {0}; seeds exist for 2, 3 and 5 only")]
    UnsupportedSeed(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The counting recurrence's hypotheses do not hold yet at this stage.
    #[error("stage too early for {constellation} at p = {prime}: {reason}")]
    StageTooEarly {
        constellation: String,
        prime: u64,
        reason: String,
    },

    #[error("constellation system is not closed: driving term {missing} of {target} is untracked")]
    NotClosed { target: String, missing: String },

    #[error("degenerate stage: dimension {dim} needs p > {}, got p = {prime}", dim + 1)]
    DegenerateStage { dim: usize, prime: u64 },

    #[error("ratio to gap 2 is undefined: census has no twin gaps")]
    DivisionUndefined,

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
