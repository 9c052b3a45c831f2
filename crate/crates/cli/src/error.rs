use thiserror::Error;

/// Process exit codes, one per error class.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const NUMERICAL: i32 = 4;
    pub const IO: i32 = 5;
    pub const VALIDATION: i32 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("numerical: {0}")]
    Numerical(thermoboost::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    /// The run finished but some requested check did not meet its threshold.
    #[error("validation: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Domain(_) => exit::DOMAIN,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Io(_) => exit::IO,
            CliError::Validation(_) => exit::VALIDATION,
        }
    }
}

impl From<thermoboost::Error> for CliError {
    fn from(e: thermoboost::Error) -> Self {
        match e {
            thermoboost::Error::Domain { .. } => CliError::Domain(e.to_string()),
            thermoboost::Error::InvalidProfile(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

/// Short token naming the class of a library error, used as a row marker.
pub fn error_marker(e: &thermoboost::Error) -> &'static str {
    use thermoboost::Error::*;
    match e {
        Domain { .. } => "error:domain",
        Accuracy { .. } => "error:accuracy",
        DegenerateProfile => "error:degenerate-profile",
        Solver(_) => "error:solver",
        Stiffness { .. } => "error:stiffness",
        OverflowGuard { .. } => "error:overflow-guard",
        DegenerateProbe => "error:degenerate-probe",
        InvalidProfile(_) => "error:invalid-profile",
    }
}
