use std::path::PathBuf;

use thiserror::Error;

use crate::exchange::ExchangeError;
use crate::netsim::NetsimError;
use crate::qram::JoinError;
use crate::scaling::ScalingError;
use crate::statevector::StateError;

/// Front-end error. Each variant maps to a fixed process exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("link {link}: {source}")]
    Infeasible {
        link: String,
        #[source]
        source: ExchangeError,
    },
    #[error("selftest failed: {failed} of {total} checks")]
    SelfTest { failed: usize, total: usize },
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl ToString) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Validation { .. } => 3,
            Error::Io { .. } => 4,
            Error::Infeasible { .. } => 5,
            Error::SelfTest { .. } => 1,
        }
    }
}

impl From<StateError> for Error {
    fn from(e: StateError) -> Self {
        Error::validation("vector", e)
    }
}

impl From<JoinError> for Error {
    fn from(e: JoinError) -> Self {
        Error::validation("vectors", e)
    }
}

impl From<ScalingError> for Error {
    fn from(e: ScalingError) -> Self {
        match e {
            ScalingError::ZeroField { field } => {
                Error::validation(format!("topology.{field}"), "must be at least 1")
            }
            ScalingError::BadReduction(_) => Error::validation("topology.classical_reduction", e),
            other => Error::validation("topology", other),
        }
    }
}

impl From<NetsimError> for Error {
    fn from(e: NetsimError) -> Self {
        match e {
            NetsimError::Scaling(s) => s.into(),
            NetsimError::InvalidEnergy { field, .. } => {
                Error::validation(format!("energy.{field}"), e)
            }
            other => Error::validation("links", other),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
