//! CLI error kinds, each mapped to a distinct exit code so batch scripts
//! can tell configuration mistakes from numeric failures.

use std::fmt;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug)]
pub enum CliError {
    /// I/O failure reading configs or writing outputs.
    Io(String),
    /// Syntactically invalid config, including unknown keys.
    Parse(String),
    /// Structurally valid config violating a domain invariant.
    Validation(String),
    /// The integration produced non-finite state.
    Divergence(String),
    /// The run completed but produced no usable result.
    NoResult(String),
}

impl CliError {
    pub fn parse(err: impl fmt::Display) -> Self {
        CliError::Parse(err.to_string())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Divergence(_) => 4,
            CliError::NoResult(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Parse(m) => write!(f, "config parse error: {m}"),
            CliError::Validation(m) => write!(f, "invalid config: {m}"),
            CliError::Divergence(m) => write!(f, "numeric failure: {m}"),
            CliError::NoResult(m) => write!(f, "no result: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ffl_core::Error> for CliError {
    fn from(err: ffl_core::Error) -> Self {
        use ffl_core::Error::*;
        match &err {
            InvalidArgument(_) | DegenerateInput(_) => CliError::Validation(err.to_string()),
            NonFinite { .. } | Divergence { .. } => CliError::Divergence(err.to_string()),
            NoSpikes | NoOptimum(_) => CliError::NoResult(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
