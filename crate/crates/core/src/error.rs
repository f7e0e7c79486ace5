use thiserror::Error;

/// Errors raised by the library and surfaced through the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's preconditions.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A randomized generator exhausted its retry budget.
    #[error("generation failed: {0}")]
    Generation(String),

    /// Inputs that must describe the same data disagree with each other.
    #[error("structural error: {0}")]
    Structural(String),

    /// A file could not be parsed.
    #[error("parse error: {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// A file could not be read or written.
    #[error("io error: {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn generation(msg: impl Into<String>) -> Self {
        Error::Generation(msg.into())
    }

    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: msg.into(),
        }
    }

    pub fn io(path: &str, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }

    /// Prefixes the message with the pipeline stage that raised the error.
    pub fn with_stage(self, stage: &str) -> Self {
        match self {
            Error::Parameter(m) => Error::Parameter(format!("{stage}: {m}")),
            Error::Generation(m) => Error::Generation(format!("{stage}: {m}")),
            Error::Structural(m) => Error::Structural(format!("{stage}: {m}")),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
