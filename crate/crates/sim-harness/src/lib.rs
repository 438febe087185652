//! Seeded, reproducible link experiments with CSV output.

pub mod config;
mod error;
pub mod experiments;
pub mod link;
pub mod output;

pub use config::{
    ChannelSetup, DetectorKind, ExperimentConfig, ExperimentKind, FrameSetup, NdMode, SystemKind, Waveform,
};
pub use error::HarnessError;
pub use experiments::{
    crossing_db, run, run_ber_sweep, run_end_to_end_packets, run_optimize_nd, run_throughput_vs_isr,
    run_validate_interference,
};
pub use link::{run_packets, stream_rng, ChannelCache, Equalizer, Link, PacketStats};
pub use output::{proportion_ci95, write_csv, Check, Report, ResultRow};
