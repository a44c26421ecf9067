use std::fmt;

/// Errors surfaced by the library.
///
/// Domain errors are contract violations by the caller (even modulus for a
/// Jacobi symbol, even degree for the Type-2 pipeline, ...). The remaining
/// variants report runtime conditions: a checkpoint that fails validation,
/// a root bracket that cannot be established, or I/O while persisting scan
/// state.
#[derive(Debug)]
pub enum Error {
    /// Precondition violated by the caller.
    Domain(String),
    /// A scan checkpoint failed structural validation; refusing to run.
    CorruptCheckpoint(String),
    /// Root finding could not establish a sign-changing bracket.
    BracketFailure(String),
    /// Underlying I/O failure (checkpoint persistence).
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::CorruptCheckpoint(msg) => write!(f, "corrupt checkpoint: {msg}"),
            Error::BracketFailure(msg) => write!(f, "bracket failure: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
