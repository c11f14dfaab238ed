use std::fmt;

use mahler_core::Error as CoreError;

/// Everything a subcommand can fail with, mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(CoreError),
    Io(std::io::Error),
}

impl CliError {
    /// 1 for domain and evaluation errors, 2 for usage errors, 3 for non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(CoreError::InvalidArgument(_)) => 2,
            CliError::Core(CoreError::NoConvergence { .. }) => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
