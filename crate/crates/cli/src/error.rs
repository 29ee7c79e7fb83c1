use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown gallery id {0:?} (try `smallball gallery list`)")]
    UnknownGallery(String),

    #[error("{0}")]
    Core(#[from] smallball::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("bad run config {path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Unknown gallery ids exit with 2; every other failure with 1.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::UnknownGallery(_) => 2,
            _ => 1,
        }
    }
}
