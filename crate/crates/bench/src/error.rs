use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Error)]
pub enum BenchError {
    /// Bad configuration; `location` is a `line:column` or a field path.
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record file {path}: {message}")]
    Records { path: PathBuf, message: String },
    #[error("no records or problems to work on")]
    EmptyInput,
    #[error("missing configuration for the table: {0}")]
    MissingConfiguration(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Core(#[from] qls_core::Error),
}

impl BenchError {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        BenchError::Config {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 config, 2 I/O, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config { .. } | BenchError::MissingConfiguration(_) | BenchError::EmptyInput => 1,
            BenchError::Io { .. } | BenchError::Records { .. } => 2,
            BenchError::Numerical(_) | BenchError::Core(_) => 3,
        }
    }
}
