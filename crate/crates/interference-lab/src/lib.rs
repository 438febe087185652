//! Malicious interference models and their images in the DAFT domain.
//!
//! Each family is synthesised as sampled baseband, pushed through the DAFT by
//! brute force and compared with its closed-form description: a flat
//! per-bin magnitude for single tones and unmatched sweeps, a single bin for
//! a sweep whose slope tracks the chirp, and circular Gaussian statistics for
//! the noise-like families.
//!
//! The deterministic closed forms are exact when the tone (or sweep start)
//! frequency sits on the subcarrier grid and the chirp rate is coprime to
//! `N`. [`randomize`] draws from that set.

mod error;
mod impact;
mod predict;
mod spec;
mod synth;
mod validate;

pub use error::InterferenceError;
pub use impact::ImpactClass;
pub use predict::{classify, matched_bin, matched_slope, predict, ClosedFormPrediction};
pub use spec::{Band, InterferenceSpec, ToneComponent};
pub use synth::{band_filter, daft_image, synth, synth_with};
pub use validate::{
    flat_sweep_cycles, magnitude_error, moment_check, randomize, relative_error_db, to_db, MomentReport, DB_FLOOR,
};
