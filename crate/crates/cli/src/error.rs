use thiserror::Error;

/// Failures mapped to process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    /// 1 for I/O and parse failures, 2 for domain violations.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl From<quasifree::Error> for CliError {
    fn from(e: quasifree::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}
