use cfode_core::expr::ExprError;
use cfode_core::Error;
use std::path::PathBuf;

/// Failure of a command, carrying the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid {flag}: {message}")]
    Validation { flag: String, message: String },
    #[error("{flag}: {source}")]
    Domain {
        flag: String,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Solver(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(flag: impl Into<String>, message: impl ToString) -> Self {
        Self::Validation {
            flag: flag.into(),
            message: message.to_string(),
        }
    }

    /// Maps parameter errors raised while building a problem to validation
    /// failures of the corresponding flag; anything else is a solver error.
    pub fn from_setup(err: Error, flag_of: impl Fn(&str) -> &'static str) -> Self {
        match &err {
            Error::InvalidParameter { name, .. } => Self::validation(flag_of(name), err),
            Error::OrderOutOfRange { .. } => Self::validation(flag_of("order"), err),
            Error::InvalidGrid(_) | Error::GridTooSmall { .. } => Self::validation(flag_of("grid"), err),
            _ => Self::Solver(err),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation { .. } | Self::Io { .. } => 2,
            Self::Domain { .. } => 3,
            Self::Solver(Error::NotContractive { .. }) => 4,
            Self::Solver(Error::MaxIterationsExceeded { .. }) => 5,
            Self::Solver(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
