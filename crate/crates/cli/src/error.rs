use serde::Serialize;
use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Numeric(_) => "numeric",
        }
    }

    pub fn record(&self, command: Option<&str>) -> ErrorRecord {
        ErrorRecord {
            error: self.kind(),
            exit_code: self.exit_code(),
            command: command.map(str::to_owned),
            message: self.to_string(),
        }
    }
}

impl From<uop_core::Error> for CliError {
    fn from(e: uop_core::Error) -> Self {
        use uop_core::Error as E;
        match e {
            E::Domain(_) | E::InvalidConfig(_) => CliError::Usage(e.to_string()),
            E::InsufficientData(_) | E::Degenerate(_) | E::NoDecorrelation { .. } => CliError::Data(e.to_string()),
            E::Numeric(_) | E::NonConvergence(_) => CliError::Numeric(e.to_string()),
        }
    }
}

/// One-line JSON written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub exit_code: i32,
    pub command: Option<String>,
    pub message: String,
}
