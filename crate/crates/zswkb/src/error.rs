use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("energy level {mu} is above the potential maximum {amax}")]
    NoBarrier { mu: f64, amax: f64 },
    #[error("out of window: {0}")]
    OutOfWindow(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("integration failure: {0}")]
    Integration(String),
    #[error("ill-conditioned: {0}")]
    Conditioning(String),
    #[error("grid size {n} under-resolves the problem; need at least {required}")]
    Resolution { n: usize, required: usize },
    #[error("undefined phase: {0}")]
    UndefinedPhase(String),
    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
