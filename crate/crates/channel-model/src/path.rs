use daft_core::{DaftParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::ChannelError;

/// One propagation path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "PathRecord", into = "PathRecord")]
pub struct PathSpec {
    pub gain: C64,
    /// Integer part of the delay in samples.
    pub delay_int: usize,
    /// Fractional delay in `(-1/2, 1/2]` samples.
    pub delay_frac: f64,
    /// Doppler shift in cycles per sample.
    pub doppler_norm: f64,
}

#[derive(Serialize, Deserialize)]
struct PathRecord {
    re: f64,
    im: f64,
    delay_int: usize,
    delay_frac: f64,
    doppler_norm: f64,
}

impl From<PathRecord> for PathSpec {
    fn from(r: PathRecord) -> Self {
        Self { gain: C64::new(r.re, r.im), delay_int: r.delay_int, delay_frac: r.delay_frac, doppler_norm: r.doppler_norm }
    }
}

impl From<PathSpec> for PathRecord {
    fn from(p: PathSpec) -> Self {
        Self { re: p.gain.re, im: p.gain.im, delay_int: p.delay_int, delay_frac: p.delay_frac, doppler_norm: p.doppler_norm }
    }
}

impl PathSpec {
    /// Path with integer delay and a Doppler of `k` bins at frame length `n`.
    pub fn integer(gain: C64, delay: usize, k: f64, n: usize) -> Self {
        Self { gain, delay_int: delay, delay_frac: 0.0, doppler_norm: k / n as f64 }
    }

    pub fn delay(&self) -> f64 {
        self.delay_int as f64 + self.delay_frac
    }

    /// Doppler in bins, `k = N v`.
    pub fn k(&self, n: usize) -> f64 {
        self.doppler_norm * n as f64
    }

    /// Integer part `alpha` of `k = alpha + a` with `a` in `(-1/2, 1/2]`.
    pub fn alpha(&self, n: usize) -> i64 {
        let k = self.k(n);
        let r = k.round();
        if (k - r).abs() < 1e-9 {
            return r as i64;
        }
        (k - 0.5).ceil() as i64
    }

    /// Fractional Doppler `a`.
    pub fn a(&self, n: usize) -> f64 {
        let a = self.k(n) - self.alpha(n) as f64;
        if a.abs() < 1e-9 {
            0.0
        } else {
            a
        }
    }

    pub fn is_integer_doppler(&self, n: usize) -> bool {
        self.a(n) == 0.0
    }

    /// Band centre `loc = <2 N c1 l - alpha>_N`. For a fractional delay the
    /// centre is the nearest integer to `2 N c1 l - k`.
    pub fn loc(&self, p: &DaftParams) -> usize {
        let n = p.n as i64;
        let q = p.q() as i64;
        if self.delay_frac == 0.0 {
            (q * self.delay_int as i64 - self.alpha(p.n)).rem_euclid(n) as usize
        } else {
            let c = q as f64 * self.delay() - self.k(p.n);
            ((c + 0.5).floor() as i64).rem_euclid(n) as usize
        }
    }
}

/// A set of paths plus the seed it was drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub paths: Vec<PathSpec>,
    pub rng_seed: u64,
}

impl ChannelRealization {
    pub fn new(paths: Vec<PathSpec>) -> Result<Self, ChannelError> {
        if paths.is_empty() {
            return Err(ChannelError::Domain("a channel needs at least one path".into()));
        }
        for p in &paths {
            if !(p.delay_frac > -0.5 && p.delay_frac <= 0.5) {
                return Err(ChannelError::Domain(format!("fractional delay {} outside (-1/2, 1/2]", p.delay_frac)));
            }
        }
        Ok(Self { paths, rng_seed: 0 })
    }

    /// Paths with the given integer delays, integer Doppler bins and gains.
    pub fn integer(gains: &[C64], delays: &[usize], k: &[f64], n: usize) -> Result<Self, ChannelError> {
        if gains.len() != delays.len() || gains.len() != k.len() {
            return Err(ChannelError::Domain("gains, delays and Doppler lists differ in length".into()));
        }
        Self::new(gains.iter().zip(delays).zip(k).map(|((&g, &d), &k)| PathSpec::integer(g, d, k, n)).collect())
    }

    pub fn identity() -> Self {
        Self { paths: vec![PathSpec::integer(C64::new(1.0, 0.0), 0, 0.0, 2)], rng_seed: 0 }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn max_delay_int(&self) -> usize {
        self.paths.iter().map(|p| p.delay_int).max().unwrap_or(0)
    }

    /// `h_L = sum |h_i|^2`.
    pub fn total_gain(&self) -> f64 {
        self.paths.iter().map(|p| p.gain.norm_sqr()).sum()
    }

    pub fn has_fractional_delay(&self) -> bool {
        self.paths.iter().any(|p| p.delay_frac != 0.0)
    }

    pub fn is_integer_doppler(&self, n: usize) -> bool {
        self.paths.iter().all(|p| p.is_integer_doppler(n))
    }
}

/// Draw a random channel: gains i.i.d. `CN(0, 1/L)`, Dopplers uniform in
/// `[-v_max, v_max]` (rounded to whole bins of an `n`-point frame when
/// `fractional` is false).
pub fn sample_random_channel(
    l: usize,
    delays: &[usize],
    doppler_max_norm: f64,
    fractional: bool,
    n: usize,
    seed: u64,
) -> Result<ChannelRealization, ChannelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ch = sample_random_channel_with(&mut rng, l, delays, doppler_max_norm, fractional, n)?;
    ch.rng_seed = seed;
    Ok(ch)
}

/// As [`sample_random_channel`] with a caller-owned generator.
pub fn sample_random_channel_with<R: Rng + ?Sized>(
    rng: &mut R,
    l: usize,
    delays: &[usize],
    doppler_max_norm: f64,
    fractional: bool,
    n: usize,
) -> Result<ChannelRealization, ChannelError> {
    if l == 0 {
        return Err(ChannelError::Domain("path count must be positive".into()));
    }
    if delays.len() != l {
        return Err(ChannelError::Domain(format!("expected {l} delays, got {}", delays.len())));
    }
    if !(doppler_max_norm >= 0.0) {
        return Err(ChannelError::Domain("maximum Doppler must be non-negative".into()));
    }
    let normal = Normal::new(0.0, (0.5 / l as f64).sqrt()).expect("valid sigma");
    let paths = delays
        .iter()
        .map(|&d| {
            let gain = C64::new(normal.sample(rng), normal.sample(rng));
            let v = if doppler_max_norm > 0.0 { rng.gen_range(-doppler_max_norm..=doppler_max_norm) } else { 0.0 };
            let v = if fractional { v } else { (v * n as f64).round() / n as f64 };
            PathSpec { gain, delay_int: d, delay_frac: 0.0, doppler_norm: v }
        })
        .collect();
    Ok(ChannelRealization { paths, rng_seed: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doppler_split() {
        let n = 64;
        for (k, alpha, a) in [(2.0, 2, 0.0), (0.5, 0, 0.5), (-0.5, -1, 0.5), (1.3, 1, 0.3), (-1.7, -2, 0.3)] {
            let p = PathSpec::integer(C64::new(1.0, 0.0), 0, k, n);
            assert_eq!(p.alpha(n), alpha, "k = {k}");
            assert!((p.a(n) - a).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn integer_mode_of_three_path_channel() {
        let ch = ChannelRealization::integer(&[C64::new(1.0, 0.0); 3], &[0, 4, 8], &[2.0, 1.0, 0.0], 256).unwrap();
        let alphas: Vec<i64> = ch.paths.iter().map(|p| p.alpha(256)).collect();
        assert_eq!(alphas, vec![2, 1, 0]);
        assert!(ch.paths.iter().all(|p| p.a(256) == 0.0));
        let p = DaftParams::with_default_chirps(256, 16, 2.0 / 256.0).unwrap();
        let locs: Vec<usize> = ch.paths.iter().map(|q| q.loc(&p)).collect();
        // q = 5: loc = <5 l - alpha>
        assert_eq!(locs, vec![254, 19, 40]);
    }

    #[test]
    fn zero_doppler_bound_gives_static_paths() {
        let ch = sample_random_channel(3, &[0, 4, 8], 0.0, true, 128, 3).unwrap();
        assert!(ch.paths.iter().all(|p| p.doppler_norm == 0.0));
    }

    #[test]
    fn integer_mode_rounds_doppler() {
        let ch = sample_random_channel(4, &[0, 1, 2, 3], 3.0 / 128.0, false, 128, 11).unwrap();
        for p in &ch.paths {
            assert!((p.k(128) - p.k(128).round()).abs() < 1e-9);
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let a = sample_random_channel(3, &[0, 4, 8], 0.01, true, 256, 42).unwrap();
        let b = sample_random_channel(3, &[0, 4, 8], 0.01, true, 256, 42).unwrap();
        assert_eq!(a, b);
        assert!(sample_random_channel(0, &[], 0.0, true, 8, 1).is_err());
    }
}
