use serde::Serialize;
use thiserror::Error;

/// Failures of a suite run, each with its own exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Range(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Serialize)]
struct Record<'a> {
    error: &'a str,
    exit_code: i32,
    message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Range(_) => "range",
            CliError::Io(_) => "io",
            CliError::Other(_) => "other",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Range(_) => 3,
            CliError::Io(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    /// One-line JSON record for standard error.
    pub fn record(&self) -> String {
        serde_json::to_string(&Record {
            error: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string(),
        })
        .expect("plain record serializes")
    }
}

impl From<sawtrace::Error> for CliError {
    fn from(e: sawtrace::Error) -> Self {
        use sawtrace::Error as E;
        match e {
            E::Format(_) => CliError::Parse(e.to_string()),
            E::Range(_) | E::ClassifiedBounded(_) | E::GridMismatch(_) | E::InvalidStepFunction(_) => {
                CliError::Range(e.to_string())
            }
            E::QuadratureBudget { .. } | E::ZeroDenominator { .. } => CliError::Other(e.to_string()),
        }
    }
}
