use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Invalid or unreadable configuration (exit code 2).
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Daft(#[from] daft_core::DaftError),
    #[error(transparent)]
    Channel(#[from] channel_model::ChannelError),
    #[error(transparent)]
    Interference(#[from] interference_lab::InterferenceError),
    #[error(transparent)]
    Chain(#[from] spread_code_chain::ChainError),
    #[error(transparent)]
    Detector(#[from] detectors::DetectorError),
    #[error(transparent)]
    Optimizer(#[from] throughput_optimizer::OptimizerError),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 1,
        }
    }
}
