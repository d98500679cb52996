use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("no far instance found within distortion budget (factor tried up to {0})")]
    DistortionBudget(u64),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
