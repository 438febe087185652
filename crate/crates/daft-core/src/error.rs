use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DaftError {
    #[error("dimension mismatch: expected {expected} samples, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid DAFT parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
}
