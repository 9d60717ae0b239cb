//! Exit-code-aware error type.
//!
//! Exit codes: 0 success, 1 usage/flag error, 2 input-data error,
//! 3 numerical failure.

use eva_triage_core::Error as CoreError;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::InvalidParam(_) | CoreError::InvalidConfig(_) => {
                CliError::usage(err.to_string())
            }
            CoreError::InvalidData(_) | CoreError::Binning(_) => CliError::data(err.to_string()),
            CoreError::Numerical(_) | CoreError::NonConvergence { .. } => {
                CliError::numerical(err.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
