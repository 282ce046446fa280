use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// A syntax error in a kernel, subspace or point specification, with the
/// character offset it was detected at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    /// 0-based character offset.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(input: &str, position: usize, message: impl Into<String>) -> Self {
        ParseError {
            input: input.to_string(),
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "parse error at column {}: {}",
            self.position + 1,
            self.message
        )?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(self.position))
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON in {origin}: {source}")]
    Json {
        origin: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{origin}: {message}")]
    Format { origin: String, message: String },
    #[error(transparent)]
    Core(#[from] rkhs_core::Error),
}

impl CliError {
    pub fn format(origin: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Format {
            origin: origin.into(),
            message: message.into(),
        }
    }

    /// 1 when a mathematical check inside the library failed, 2 for usage,
    /// input and domain errors.
    pub fn exit_code(&self) -> i32 {
        use rkhs_core::Error as E;
        match self {
            CliError::Core(
                E::Inconsistent { .. }
                | E::BoundViolated { .. }
                | E::InnerBelowDirect { .. }
                | E::NonMonotone { .. },
            ) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
