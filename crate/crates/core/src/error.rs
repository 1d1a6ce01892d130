use thiserror::Error;

/// Error classes shared by every module. The CLI maps them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied something outside an operation's preconditions.
    #[error("invalid input: {0}")]
    Input(String),
    /// The exact computation would exceed a configured budget or cap.
    #[error("capability limit: {0}")]
    Capability(String),
    /// A parameter derivation produced values the pipeline cannot use.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn capability<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capability(msg.into()))
}
