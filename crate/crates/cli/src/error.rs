use std::path::PathBuf;

use spectral_leverage::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed csv {}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("json serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for capacity, 4 for numeric failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Csv { .. } => 2,
            Self::Core(CoreError::Config(_)) => 2,
            Self::Core(CoreError::Capacity { .. }) => 3,
            Self::Core(_) => 4,
            Self::Io { .. } | Self::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
