use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Solver(dynwave::Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit code: 2 when the fixed-point solver failed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(dynwave::Error::NoConvergence { .. }) => 2,
            _ => 1,
        }
    }
}

impl From<dynwave::Error> for CliError {
    fn from(e: dynwave::Error) -> Self {
        match e {
            dynwave::Error::NoConvergence { .. } => CliError::Solver(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
