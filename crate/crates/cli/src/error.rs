use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{input}:{line}:{column}: {message}")]
    Parse { input: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{0}")]
    Domain(lindeg_core::Error),
}

impl CliError {
    /// 2 for mathematical failures, 1 for everything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            _ => 1,
        }
    }
}

impl From<lindeg_core::Error> for CliError {
    fn from(e: lindeg_core::Error) -> Self {
        CliError::Domain(e)
    }
}
