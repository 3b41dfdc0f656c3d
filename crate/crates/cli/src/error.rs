use std::path::{Path, PathBuf};

use mlp_core::MlpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] MlpError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("sweep needs --max-disc at least 4, got {0}")]
    SweepRange(i64),
    #[error("assertion failed at D={disc}, k={k}: {what}")]
    Assertion { disc: i64, k: i64, what: String },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion { .. } => 1,
            CliError::Core(MlpError::InvalidWeight(_)) => 3,
            CliError::Core(_) | CliError::SweepRange(_) => 2,
            CliError::Io { .. } => 4,
        }
    }
}
