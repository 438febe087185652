//! Doubly selective channel model.
//!
//! A channel is a list of paths, each with a complex gain, an integer plus
//! fractional delay and a normalised Doppler shift. It can be applied to a
//! prefixed time-domain frame or represented in the DAFT domain as a set of
//! per-path bands around the cyclic shift `loc_i`.

mod band;
mod brute;
mod error;
mod noise;
mod path;
mod time_domain;

pub use band::{build_daft_matrix, EffectiveChannel, PathBand};
pub use brute::{
    brute_force_matrix, count_empty_indicator_intervals, indicator_epsilon, DelayModel,
};
pub use error::ChannelError;
pub use noise::{add_awgn, add_awgn_in_place};
pub use path::{sample_random_channel, sample_random_channel_with, ChannelRealization, PathSpec};
pub use time_domain::{apply_time_domain, fractional_delay_kernel, KERNEL_HALF_WIDTH};

/// Default Doppler-spread radius of the DAFT-domain bands.
pub const DEFAULT_KV: usize = 7;
