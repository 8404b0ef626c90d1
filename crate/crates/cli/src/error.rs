use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {msg}")]
    ConfigLine { line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] hyperam_core::Error),
}

impl CliError {
    pub fn at(line: usize, msg: impl Into<String>) -> Self {
        CliError::ConfigLine {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit status: usage and config problems are 2, the rest 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigLine { .. } | CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Core(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
