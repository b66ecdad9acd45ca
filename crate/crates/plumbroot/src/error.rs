use plumbroot_core::blowdown::BlowdownError;
use plumbroot_core::enumerate::EnumError;
use plumbroot_core::models::ModelError;
use plumbroot_core::roots::RootError;
use plumbroot_core::tower::TowerError;
use plumbroot_core::FormError;
use thiserror::Error;

use crate::format::ParseError;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    /// Unreadable input, syntax errors, invalid graphs and bad arguments.
    pub const INPUT: i32 = 2;
    pub const NOT_NEGATIVE_DEFINITE: i32 = 3;
    pub const BUDGET: i32 = 4;
    pub const INTERNAL: i32 = 5;
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("{0}")]
    Usage(String),
    #[error("resource limit: {0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse(_) | Error::Usage(_) => exit::INPUT,
            Error::Form(_) => exit::NOT_NEGATIVE_DEFINITE,
            Error::Budget(_) => exit::BUDGET,
            Error::Internal(_) => exit::INTERNAL,
        }
    }
}

impl From<EnumError> for Error {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::BudgetExceeded { .. } => Error::Budget(e.to_string()),
            _ => Error::Internal(e.to_string()),
        }
    }
}

impl From<RootError> for Error {
    fn from(e: RootError) -> Self {
        match e {
            RootError::Enum(e) => e.into(),
            RootError::LevelCap { .. } => Error::Budget(e.to_string()),
        }
    }
}

impl From<BlowdownError> for Error {
    fn from(e: BlowdownError) -> Self {
        match e {
            BlowdownError::Enum(e) => e.into(),
            BlowdownError::CapExceeded { .. } => Error::Budget(e.to_string()),
            _ => Error::Internal(e.to_string()),
        }
    }
}

impl From<TowerError> for Error {
    fn from(e: TowerError) -> Self {
        match e {
            TowerError::TruncationTooShallow { .. } => Error::Usage(e.to_string()),
            _ => Error::Internal(e.to_string()),
        }
    }
}

impl From<ModelError> for Error {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::BudgetExceeded { .. } => Error::Budget(e.to_string()),
            _ => Error::Internal(e.to_string()),
        }
    }
}
