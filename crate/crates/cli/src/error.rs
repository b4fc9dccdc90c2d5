use lv_resilience::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input, 3 outside the bistable regime, 4 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Model(e) if e.is_invalid_input() => 2,
            CliError::Model(e) if e.is_regime_violation() => 3,
            CliError::Model(_) => 4,
        }
    }
}
