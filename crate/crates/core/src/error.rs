use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input data that cannot describe a valid object (bad table entry, bad JSON shape).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// An operation was called outside its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A size limit was exceeded; the computation was not attempted.
    #[error("refused: {what} is {actual}, limit is {limit} (override with {env})")]
    Refused {
        what: &'static str,
        actual: usize,
        limit: usize,
        env: &'static str,
    },

    /// A structural self-check failed. On a verified median algebra this is a bug.
    #[error("internal invariant broken: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Refused { .. })
    }
}
