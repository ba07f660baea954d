use smflow::SmfError;
use std::fmt;
use thiserror::Error;

/// Where a configuration problem was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Line(usize),
    Flag(String),
    /// A key left at its default value.
    Default,
    /// The configuration file as a whole.
    File,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Flag(name) => write!(f, "flag --{name}"),
            Location::Default => write!(f, "default value"),
            Location::File => write!(f, "configuration file"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    pub location: Location,
    pub message: String,
}

impl ParseError {
    pub fn at(location: Location, message: impl Into<String>) -> Self {
        ParseError { location, message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("configuration error: {0}")]
    Parse(#[from] ParseError),

    #[error("{context}: {source}")]
    Numeric { context: String, source: SmfError },

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, WorkbenchError>;

pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> Result<T>;
}

impl<T> Context<T> for std::result::Result<T, SmfError> {
    fn context(self, what: impl Into<String>) -> Result<T> {
        self.map_err(|source| WorkbenchError::Numeric { context: what.into(), source })
    }
}

/// Process exit codes of the command-line tool.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const ACCEPTANCE_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERIC_ABORT: i32 = 3;
}

impl WorkbenchError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        WorkbenchError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            WorkbenchError::Parse(_) => exit::USAGE,
            WorkbenchError::Numeric { source, .. } => match source {
                SmfError::InvalidInput(_) | SmfError::ProfileTooLarge { .. } => exit::USAGE,
                _ => exit::NUMERIC_ABORT,
            },
            WorkbenchError::Io { .. } => exit::USAGE,
        }
    }
}
