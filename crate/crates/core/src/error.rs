use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside the operation's domain
    /// (vertex out of range, odd order for a cubic graph, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input text could not be parsed. `offset` is a byte position into the
    /// offending line or token stream.
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    /// The operation is defined but deliberately not supported at this size
    /// (e.g. canonical forms above the exhaustive cap).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An exhaustive search gave up after its node budget.
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },

    /// The constructive solver stalled on every restart.
    #[error("no coloring found within {restarts} restarts (last stall: {last_stall})")]
    RestartsExhausted { restarts: u32, last_stall: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(offset: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
