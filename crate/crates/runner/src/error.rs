use std::path::PathBuf;

use thiserror::Error;

/// Failures of an experiment run, grouped by category for the CLI exit code.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Numeric(#[from] xxz_core::Error),
}

impl RunError {
    /// Short category tag printed by the CLI.
    pub fn category(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Io { .. } => "io",
            Self::Format { .. } => "format",
            Self::Numeric(_) => "numeric",
        }
    }

    /// Process exit code for this category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Io { .. } => 3,
            Self::Format { .. } => 4,
            Self::Numeric(_) => 5,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Self::Format { path: path.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, RunError>;
