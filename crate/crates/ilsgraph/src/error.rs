use thiserror::Error;

/// Error type shared by every operation in the crate.
///
/// The three variants mirror the CLI exit codes: `Input` maps to exit code 3,
/// `Capability` to 2, and `Defect` to 1. A `Defect` is never a caller mistake;
/// it signals that an internal consistency check failed and the library has a
/// bug.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed argument, index out of range, or violated precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// The request is well-formed but exceeds an enumeration or search guard.
    #[error("capability exceeded: {0}")]
    Capability(String),
    /// An internal invariant failed; indicates a bug, never a user error.
    #[error("internal defect: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub fn defect(msg: impl Into<String>) -> Self {
        Error::Defect(msg.into())
    }
}
