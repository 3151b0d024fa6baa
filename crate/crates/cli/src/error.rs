use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The scenario does not match the schema.
    #[error("{location}: {message}")]
    Schema { location: String, message: String },
    /// A numerical precondition failed inside the library.
    #[error("numeric error: {0}")]
    Numeric(#[from] tfhom::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}
