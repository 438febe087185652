use std::collections::HashMap;

use channel_model::{
    add_awgn_in_place, build_daft_matrix, sample_random_channel_with, ChannelRealization, EffectiveChannel,
};
use daft_core::{DaftParams, DaftPlan, DaftSignal};
use detectors::{cdd_equalize, CddConfig, MmseFilter};
use interference_lab::{synth_with, InterferenceSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use spread_code_chain::{
    deinterleave, despread_bits, ecc_decode, ecc_encode, interleave, packet_success, sequence_for_length, EccParams,
    SpreadingSequence,
};

use crate::config::ChannelSetup;
use crate::HarnessError;

/// Generator for work item `item` of sweep point `point`. Streams are
/// independent of thread count and scheduling.
pub fn stream_rng(seed: u64, point: u64, item: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ point.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    r.set_stream(item);
    r
}

/// One transmit/receive chain: spreading, DAFT-domain channel, interference
/// and noise, then equalisation and despreading.
pub struct Link {
    pub params: DaftParams,
    plan: DaftPlan,
    pub seq: SpreadingSequence,
    pub nm: usize,
    pub channel: ChannelSetup,
    /// Interference at its final power, if any.
    pub interference: Option<InterferenceSpec>,
    pub pn: f64,
}

/// Receiver front end.
pub enum Equalizer<'a> {
    Cdd,
    Mmse(&'a MmseFilter),
}

impl Link {
    pub fn new(
        params: DaftParams,
        nd: usize,
        nm: usize,
        channel: ChannelSetup,
        interference: Option<InterferenceSpec>,
        pn: f64,
    ) -> Result<Self, HarnessError> {
        let chips = params.n * if nm == 4 { 2 } else { 1 };
        if nd == 0 || chips % nd != 0 {
            return Err(HarnessError::Config(format!("nd: {nd} does not divide the {chips} chips of a frame")));
        }
        if let Some(s) = &interference {
            s.validate()?;
        }
        Ok(Self { plan: DaftPlan::new(params)?, params, seq: sequence_for_length(nd)?, nm, channel, interference, pn })
    }

    pub fn nd(&self) -> usize {
        self.seq.nd()
    }

    pub fn bits_per_frame(&self) -> usize {
        self.params.n * if self.nm == 4 { 2 } else { 1 } / self.nd()
    }

    pub fn interference_power(&self) -> f64 {
        self.interference.as_ref().map_or(0.0, |s| s.power())
    }

    /// Fresh gains (and Dopplers, unless fixed) for every call.
    pub fn draw_channel<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<EffectiveChannel, HarnessError> {
        Ok(build_daft_matrix(&self.draw_paths(rng)?, &self.params, self.channel.kv)?)
    }

    /// As [`Link::draw_channel`], reusing bands from `cache` when the
    /// Dopplers come from a finite set (fixed, or rounded to whole bins).
    /// Only the gains change between draws then, and the random stream is
    /// consumed identically.
    pub fn draw_channel_cached<'c, R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        cache: &'c mut ChannelCache,
    ) -> Result<&'c EffectiveChannel, HarnessError> {
        let ch = self.draw_paths(rng)?;
        if self.channel.fractional && self.channel.doppler_bins.is_none() {
            cache.scratch = build_daft_matrix(&ch, &self.params, self.channel.kv)?;
            return Ok(&cache.scratch);
        }
        // adding +0 folds -0 into +0
        let key: Vec<u64> = ch.paths.iter().map(|p| (p.doppler_norm + 0.0).to_bits()).collect();
        let eff = match cache.bands.entry(key) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(build_daft_matrix(&ch, &self.params, self.channel.kv)?)
            }
        };
        for (b, p) in eff.bands.iter_mut().zip(&ch.paths) {
            b.gain = p.gain;
        }
        Ok(eff)
    }

    fn draw_paths<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ChannelRealization, HarnessError> {
        let c = &self.channel;
        let n = self.params.n;
        let vmax = if c.doppler_bins.is_some() { 0.0 } else { c.doppler_max_bins / n as f64 };
        let mut ch = sample_random_channel_with(rng, c.l(), &c.delays, vmax, c.fractional, n)?;
        if let Some(k) = &c.doppler_bins {
            for (p, &k) in ch.paths.iter_mut().zip(k) {
                p.doppler_norm = k / n as f64;
            }
        }
        Ok(ch)
    }

    /// `y = H x + DAFT(interference) + w` for one frame of bits.
    pub fn transmit<R: Rng + ?Sized>(&self, bits: &[u8], eff: &EffectiveChannel, rng: &mut R) -> Result<DaftSignal, HarnessError> {
        let x = spread_code_chain::spread_bits(bits, &self.seq, self.nm)?;
        let mut y = eff.apply(&x.bins)?;
        if let Some(spec) = &self.interference {
            let mut j = synth_with(spec, self.params.n, rng)?.samples;
            self.plan.forward_in_place(&mut j)?;
            for (a, b) in y.iter_mut().zip(&j) {
                *a += b;
            }
        }
        add_awgn_in_place(&mut y, self.pn, rng)?;
        Ok(DaftSignal::new(y))
    }

    /// Per-bit decision statistics; positive means bit 0.
    pub fn detect(&self, y: &DaftSignal, eff: &EffectiveChannel, eq: &Equalizer) -> Result<Vec<f64>, HarnessError> {
        let frame = match eq {
            Equalizer::Cdd => cdd_equalize(y, eff, &self.params, &CddConfig { kv: self.channel.kv })?,
            Equalizer::Mmse(f) => f.equalize(y)?,
        };
        Ok(despread_bits(&frame.x_hat, &self.seq, self.nm)?)
    }

    /// Regularisation for the MMSE filter: noise plus interference treated
    /// as white.
    pub fn mmse_filter(&self, eff: &EffectiveChannel) -> Result<MmseFilter, HarnessError> {
        Ok(MmseFilter::new(eff, self.pn + self.interference_power())?)
    }
}

/// Per-worker store of unit-gain bands.
pub struct ChannelCache {
    bands: HashMap<Vec<u64>, EffectiveChannel>,
    scratch: EffectiveChannel,
}

impl Default for ChannelCache {
    fn default() -> Self {
        let scratch = EffectiveChannel { n: 0, kv: 0, bands: Vec::new(), captured_energy: Vec::new(), diagnostics: Vec::new() };
        Self { bands: HashMap::new(), scratch }
    }
}

pub fn hard_bits(stats: &[f64]) -> impl Iterator<Item = u8> + '_ {
    stats.iter().map(|&s| u8::from(s < 0.0))
}

pub fn random_bits<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.gen::<bool>())).collect()
}

/// Packet-level Monte Carlo counts, with per-block sums of squares.
///
/// Packets of one block share frames, so their outcomes are correlated;
/// blocks are independent and carry the confidence intervals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PacketStats {
    pub blocks: u64,
    pub packets: u64,
    pub successes: u64,
    /// Coded bits before decoding and how many were wrong.
    pub bits: u64,
    pub bit_errors: u64,
    pub successes_sq: u64,
    pub bit_errors_sq: u64,
}

impl std::ops::Add for PacketStats {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            blocks: self.blocks + o.blocks,
            packets: self.packets + o.packets,
            successes: self.successes + o.successes,
            bits: self.bits + o.bits,
            bit_errors: self.bit_errors + o.bit_errors,
            successes_sq: self.successes_sq + o.successes_sq,
            bit_errors_sq: self.bit_errors_sq + o.bit_errors_sq,
        }
    }
}

/// 95% half-width of `sum / units` from per-block totals, treating blocks as
/// the independent samples.
fn cluster_ci95(blocks: u64, sum: u64, sum_sq: u64, units: u64) -> f64 {
    if blocks < 2 || units == 0 {
        return f64::NAN;
    }
    let b = blocks as f64;
    let var_block = (sum_sq as f64 - (sum as f64).powi(2) / b) / (b - 1.0);
    1.96 * (b * var_block.max(0.0)).sqrt() / units as f64
}

impl PacketStats {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.packets as f64
    }

    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits as f64
    }

    pub fn success_ci95(&self) -> f64 {
        cluster_ci95(self.blocks, self.successes, self.successes_sq, self.packets)
    }

    pub fn ber_ci95(&self) -> f64 {
        cluster_ci95(self.blocks, self.bit_errors, self.bit_errors_sq, self.bits)
    }
}

/// Packets are sent in blocks of `B` (the bits per frame). A block's coded
/// bits are block interleaved with depth `B`, so frame `c` carries bit `c`
/// of every packet, and each frame sees a fresh channel. Bits of one packet
/// therefore never share a frame. The packet count is rounded up to a whole
/// number of blocks.
pub fn run_packets(link: &Link, ecc: &EccParams, np: usize, packets: usize, seed: u64, point: u64) -> Result<PacketStats, HarnessError> {
    ecc.validate()?;
    let b = link.bits_per_frame();
    let blocks = packets.div_ceil(b).max(1);
    let per_block: Result<Vec<PacketStats>, HarnessError> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut rng = stream_rng(seed, point, blk as u64);
            let mut coded = Vec::new();
            for _ in 0..b {
                coded.extend(ecc_encode(&random_bits(np, &mut rng), ecc)?);
            }
            let nc = coded.len() / b;
            let tx = interleave(&coded, b)?;
            let mut rx = Vec::with_capacity(tx.len());
            let mut cache = ChannelCache::default();
            for frame in tx.chunks_exact(b) {
                let eff = link.draw_channel_cached(&mut rng, &mut cache)?;
                let y = link.transmit(frame, eff, &mut rng)?;
                rx.extend(hard_bits(&link.detect(&y, eff, &Equalizer::Cdd)?));
            }
            let rx = deinterleave(&rx, b)?;
            let mut s = PacketStats { blocks: 1, packets: b as u64, bits: coded.len() as u64, ..Default::default() };
            for (r, t) in rx.chunks_exact(nc).zip(coded.chunks_exact(nc)) {
                s.successes += u64::from(packet_success(&ecc_decode(r, t, ecc)?));
                s.bit_errors += r.iter().zip(t).filter(|(x, y)| x != y).count() as u64;
            }
            s.successes_sq = s.successes * s.successes;
            s.bit_errors_sq = s.bit_errors * s.bit_errors;
            Ok(s)
        })
        .collect();
    Ok(per_block?.into_iter().fold(PacketStats::default(), |a, s| a + s))
}
