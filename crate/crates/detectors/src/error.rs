use channel_model::ChannelError;
use spread_code_chain::ChainError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectorError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}
