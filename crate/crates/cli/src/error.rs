use std::process::ExitCode;

/// Failure classes with distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// An input file could not be read as a Hamiltonian, state or fixture.
    #[error("{0}")]
    Parse(String),
    /// `--strict` and a requested bound fell back to its trivial value.
    #[error("{0}")]
    Inapplicable(String),
    /// A check reported failures; the report has already been written.
    #[error("{0}")]
    ChecksFailed(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Parse(_) => ExitCode::from(2),
            CliError::Inapplicable(_) => ExitCode::from(3),
            CliError::ChecksFailed(_) | CliError::Other(_) => ExitCode::from(1),
        }
    }
}

impl From<robint::Error> for CliError {
    fn from(e: robint::Error) -> Self {
        match e {
            robint::Error::Parse { .. } => CliError::Parse(e.to_string()),
            other => CliError::Other(other.into()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
