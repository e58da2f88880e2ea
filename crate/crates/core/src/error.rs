use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input is outside the desk-scale bounds of an exhaustive computation.
    #[error("size error: {0}")]
    Size(String),

    #[error("no element of order {order} in the unit group")]
    NotEmbeddable { order: u64 },

    #[error("(q, t) = ({q}, {t}) matches no row of the supersingular Weil table")]
    NotInTable { q: u64, t: i64 },

    #[error(
        "no built-in maximal order for p = {p} (p = 1 mod 8 without a recipe); \
         supply an explicit basis instead"
    )]
    UnsupportedPrime { p: u64 },

    /// A construction failed its own verification. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
