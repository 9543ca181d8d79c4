use qi_core::QiError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("cannot dispatch: {0}")]
    Dispatch(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Core(#[from] QiError),
}

pub type Result<T> = std::result::Result<T, CliError>;
