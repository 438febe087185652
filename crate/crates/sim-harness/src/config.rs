use daft_core::DaftParams;
use interference_lab::InterferenceSpec;
use serde::{Deserialize, Serialize};
use spread_code_chain::EccParams;
use throughput_optimizer::{Feasibility, SystemParams};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ValidateInterference,
    BerSweep,
    ThroughputVsIsr,
    OptimizeNd,
    EndToEndPackets,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::ValidateInterference => "validate-interference",
            ExperimentKind::BerSweep => "ber-sweep",
            ExperimentKind::ThroughputVsIsr => "throughput-vs-isr",
            ExperimentKind::OptimizeNd => "optimize-nd",
            ExperimentKind::EndToEndPackets => "end-to-end-packets",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Waveform {
    Afdm,
    /// `c1 = c2 = 0`.
    Ofdm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorKind {
    Cdd,
    Mmse,
}

/// Frame geometry. Carrier and subcarrier spacing only enter through the
/// bandwidth `N * subcarrier_spacing_hz`; physics runs at unit sample rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSetup {
    pub n: usize,
    pub ncp: usize,
    pub carrier_hz: f64,
    pub subcarrier_spacing_hz: f64,
}

impl FrameSetup {
    pub fn bandwidth_hz(&self) -> f64 {
        self.n as f64 * self.subcarrier_spacing_hz
    }

    /// Chirp parameters for `waveform`, with `c1` sized for the channel's
    /// maximum Doppler (in bins).
    pub fn params(&self, waveform: Waveform, doppler_max_bins: f64) -> Result<DaftParams, HarnessError> {
        Ok(match waveform {
            Waveform::Afdm => DaftParams::with_default_chirps(self.n, self.ncp, doppler_max_bins / self.n as f64)?,
            Waveform::Ofdm => DaftParams::ofdm(self.n, self.ncp)?,
        })
    }
}

/// Multipath model; gains are redrawn `CN(0, 1/L)` for every realisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSetup {
    pub delays: Vec<usize>,
    /// Fixed per-path Dopplers in bins; random in `[-max, max]` when absent.
    pub doppler_bins: Option<Vec<f64>>,
    pub doppler_max_bins: f64,
    /// Keep random Dopplers fractional instead of rounding to whole bins.
    pub fractional: bool,
    /// Band radius used for the channel and the detector.
    pub kv: usize,
}

impl ChannelSetup {
    pub fn l(&self) -> usize {
        self.delays.len()
    }
}

/// Link variants compared in throughput sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// AFDM with the fixed spreading length.
    AfdmF,
    /// OFDM (`c1 = c2 = 0`) with the fixed spreading length.
    OfdmF,
    /// AFDM with the optimizer's spreading length.
    AfdmA,
}

impl SystemKind {
    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::AfdmF => "afdm_f",
            SystemKind::OfdmF => "ofdm_f",
            SystemKind::AfdmA => "afdm_a",
        }
    }
}

/// Spreading length policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NdMode {
    Fixed(usize),
    /// Chosen per link budget by the throughput optimizer.
    Adaptive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the subcommand when present.
    #[serde(default)]
    pub kind: Option<ExperimentKind>,
    pub frame: FrameSetup,
    pub channel: ChannelSetup,
    /// Interference family; its power is set from the ISR grid.
    pub interference: InterferenceSpec,
    pub nd: NdMode,
    /// Candidate spreading lengths for adaptive runs; divisors of
    /// `N log2 Nm` when absent.
    #[serde(default)]
    pub feasibility: Option<Feasibility>,
    /// Systems simulated packet by packet in throughput sweeps.
    pub mc_systems: Vec<SystemKind>,
    pub nm: usize,
    pub np: usize,
    pub ecc: EccParams,
    pub snr_db: f64,
    pub isr_db: Vec<f64>,
    pub ebn0_db: Vec<f64>,
    pub detectors: Vec<DetectorKind>,
    /// Frames sharing one channel realisation in BER sweeps.
    pub frames_per_channel: usize,
    /// Trials per point: interference draws, bits (BER sweeps) or packets,
    /// depending on the experiment.
    pub trials: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    /// Full-scale frame: N = 992, Ncp = 69, QPSK, 544-bit packets, (17, 31, 7)
    /// code, 24 GHz carrier, 15 kHz spacing, three paths at delays 0/4/8 with
    /// up to 22.22 kHz Doppler.
    fn default() -> Self {
        Self {
            kind: None,
            frame: FrameSetup { n: 992, ncp: 69, carrier_hz: 24e9, subcarrier_spacing_hz: 15e3 },
            channel: ChannelSetup {
                delays: vec![0, 4, 8],
                doppler_bins: None,
                doppler_max_bins: 22.22e3 / 15e3,
                fractional: true,
                kv: 7,
            },
            interference: InterferenceSpec::Broadband { pi: 1.0 },
            nd: NdMode::Fixed(16),
            feasibility: None,
            mc_systems: vec![SystemKind::AfdmF, SystemKind::OfdmF, SystemKind::AfdmA],
            nm: 4,
            np: 544,
            ecc: EccParams::rs31_17(),
            snr_db: -10.0,
            isr_db: vec![0.0, 4.0, 8.0, 12.0, 16.0, 20.0, 24.0, 28.0, 30.0],
            ebn0_db: vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0],
            detectors: vec![DetectorKind::Cdd, DetectorKind::Mmse],
            frames_per_channel: 20,
            trials: 1000,
            seed: 1,
        }
    }
}

fn bad(field: &str, why: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("{field}: {why}"))
}

impl ExperimentConfig {
    /// Desk-scale variant: N = 256, Ncp = 16, SNR 0 dB.
    pub fn desk() -> Self {
        let mut c = Self::default();
        c.frame.n = 256;
        c.frame.ncp = 16;
        c.snr_db = 0.0;
        c
    }

    /// Desk-scale config for `kind`. The packet experiment moves to a long
    /// spreading code at low SNR, where the CDD cross-path residual is small
    /// next to noise plus interference, and to integer Doppler, so the band
    /// carries all of each path's energy.
    pub fn desk_for(kind: ExperimentKind) -> Self {
        let mut c = Self::desk().for_kind(kind);
        if kind == ExperimentKind::EndToEndPackets {
            c.nd = NdMode::Fixed(128);
            c.snr_db = -10.0;
            c.channel.fractional = false;
            c.isr_db = vec![15.0, 16.0, 17.0, 18.0, 19.0];
        }
        if kind == ExperimentKind::ThroughputVsIsr {
            // the adaptive code grows to hundreds of chips at high ISR, which
            // puts a packet MC out of desk reach; it stays analytic here
            c.mc_systems = vec![SystemKind::AfdmF, SystemKind::OfdmF];
            c.isr_db = vec![0.0, 10.0, 20.0, 30.0];
        }
        c
    }

    /// Per-experiment adjustments on top of `self`.
    pub fn for_kind(mut self, kind: ExperimentKind) -> Self {
        self.kind = Some(kind);
        match kind {
            ExperimentKind::ValidateInterference => self.trials = 10_000,
            ExperimentKind::BerSweep => {
                // fixed Dopplers of 2, 1 and 0 bins on the three paths
                self.channel.doppler_bins = Some(vec![2.0, 1.0, 0.0]);
                self.channel.doppler_max_bins = 2.0;
                self.channel.fractional = false;
                self.isr_db.clear();
                self.trials = 100_000;
            }
            ExperimentKind::ThroughputVsIsr => self.trials = 1024,
            ExperimentKind::OptimizeNd => self.isr_db = vec![0.0, 10.0, 20.0, 30.0],
            ExperimentKind::EndToEndPackets => {
                self.isr_db = vec![4.0, 6.0, 8.0, 10.0, 12.0];
                self.trials = 1000;
            }
        }
        self
    }

    /// Spreading length for fixed-parameter systems.
    pub fn fixed_nd(&self) -> usize {
        match self.nd {
            NdMode::Fixed(n) => n,
            NdMode::Adaptive => 16,
        }
    }

    pub fn feasible_nd(&self) -> Feasibility {
        self.feasibility.unwrap_or(Feasibility::DivisorsOf { m: self.chips_per_frame() })
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let c: Self = serde_json::from_str(text).map_err(|e| {
            HarnessError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        c.validate()?;
        Ok(c)
    }

    pub fn log2_nm(&self) -> usize {
        if self.nm == 4 {
            2
        } else {
            1
        }
    }

    /// Chips per frame, `N log2 Nm`.
    pub fn chips_per_frame(&self) -> usize {
        self.frame.n * self.log2_nm()
    }

    pub fn system(&self) -> SystemParams {
        SystemParams { n: self.frame.n, ncp: self.frame.ncp, nm: self.nm, np: self.np, ecc: self.ecc, l: self.channel.l() }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.frame.params(Waveform::Afdm, self.channel.doppler_max_bins).map_err(|e| bad("frame", e))?;
        if !(self.frame.subcarrier_spacing_hz > 0.0) {
            return Err(bad("frame.subcarrier_spacing_hz", "must be positive"));
        }
        let ch = &self.channel;
        if ch.delays.is_empty() {
            return Err(bad("channel.delays", "at least one path is required"));
        }
        if ch.delays.iter().any(|&d| d > self.frame.ncp) {
            return Err(bad("channel.delays", format!("maximum delay exceeds the prefix of {}", self.frame.ncp)));
        }
        if let Some(k) = &ch.doppler_bins {
            if k.len() != ch.l() {
                return Err(bad("channel.doppler_bins", format!("expected {} entries, got {}", ch.l(), k.len())));
            }
            if k.iter().any(|v| v.abs() > ch.doppler_max_bins + 1e-12) {
                return Err(bad("channel.doppler_bins", "entries must lie within doppler_max_bins"));
            }
        }
        if !(ch.doppler_max_bins >= 0.0) {
            return Err(bad("channel.doppler_max_bins", "must be non-negative"));
        }
        if 2 * ch.kv + 1 > self.frame.n {
            return Err(bad("channel.kv", "band wider than the frame"));
        }
        self.interference.validate().map_err(|e| bad("interference", e))?;
        if self.nm != 2 && self.nm != 4 {
            return Err(bad("nm", "modulation order must be 2 or 4"));
        }
        self.ecc.validate().map_err(|e| bad("ecc", e))?;
        if self.np == 0 || self.np % self.ecc.ni != 0 {
            return Err(bad("np", format!("must be a positive multiple of ecc.ni = {}", self.ecc.ni)));
        }
        if let NdMode::Fixed(nd) = self.nd {
            if nd == 0 || self.chips_per_frame() % nd != 0 {
                return Err(bad("nd", format!("fixed Nd must divide N log2(Nm) = {}", self.chips_per_frame())));
            }
        }
        if let Some(Feasibility::DivisorsOf { m: 0 } | Feasibility::Integers { max: 0 }) = self.feasibility {
            return Err(bad("feasibility", "the candidate set is empty"));
        }
        if self.trials == 0 {
            return Err(bad("trials", "must be positive"));
        }
        if self.frames_per_channel == 0 {
            return Err(bad("frames_per_channel", "must be positive"));
        }
        if self.isr_db.iter().chain(&self.ebn0_db).chain([&self.snr_db]).any(|v| !v.is_finite()) {
            return Err(bad("snr_db/isr_db/ebn0_db", "values must be finite"));
        }
        Ok(())
    }
}
