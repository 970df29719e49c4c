use qchancap_core::Error as CoreError;

/// Failures surfaced to the shell, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input or flags (exit 2).
    #[error("{0}")]
    Usage(String),
    /// Input that parses but is not a valid channel, state or parameter set (exit 3).
    #[error("{0}")]
    Validation(String),
    /// Request beyond a dense-size cap (exit 4).
    #[error("{0}")]
    SizeCap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::SizeCap(_) => 4,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SizeCap { .. } => CliError::SizeCap(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
