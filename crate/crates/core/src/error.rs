use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A guarded enumeration or matrix would exceed its configured size.
    #[error("capacity exceeded: {what} needs {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: String,
        limit: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The shuffle has no moves, or a bound is undefined at the requested point.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn capacity(
        what: &'static str,
        requested: impl ToString,
        limit: impl ToString,
    ) -> Self {
        Error::Capacity {
            what,
            requested: requested.to_string(),
            limit: limit.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
