//! Closed-form pre-decoding BER, codeword and packet success, packet
//! throughput, and the spreading-length optimizer built on them.

mod ber;
mod context;
mod error;
mod optimize;
mod packet;

pub use ber::{ber_before_decoding, f_value, psi_matched, theta, FValue};
pub use context::{AnalyticContext, LinkBudget, SystemParams};
pub use error::OptimizerError;
pub use optimize::{
    grid_search, optimize_nd, u_sign_changes, Feasibility, ThroughputReport, TraceEntry, MAX_NEWTON_STEPS,
};
pub use packet::{
    codeword_success, ln_codeword_success, objective_derivatives, packet_throughput, throughput_at_ber, Objective,
};
