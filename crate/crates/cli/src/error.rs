use spinlab_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Regime(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
            CliError::Regime(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Regime(_) => "out-of-regime",
            CliError::Io(_) => "io",
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::NoConvergence { .. } | CoreError::NonFinite | CoreError::Bracketing { .. } => {
                CliError::Numerical(msg)
            }
            CoreError::OutOfRegime(_) | CoreError::Pole | CoreError::FixedPoint => CliError::Regime(msg),
            _ => CliError::Config(msg),
        }
    }
}
