use spread_code_chain::ChainError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}
