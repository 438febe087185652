use daft_core::DaftError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error(transparent)]
    Daft(#[from] DaftError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("prefix of {ncp} samples cannot absorb a delay of {delay} samples")]
    InsufficientPrefix { ncp: usize, delay: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}
