use daft_core::DaftError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterferenceError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Daft(#[from] DaftError),
}
