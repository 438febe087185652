use daft_core::{cis_turns, DaftParams, C64};

use crate::brute::{dirichlet, indicator_phase_entry};
use crate::{ChannelError, ChannelRealization, PathSpec};

/// DAFT-domain band of one path: `taps[p * (2kv + 1) + (k + kv)]` holds
/// `H_i[p, <p + loc + k>_N]` without the path gain.
#[derive(Clone, Debug, PartialEq)]
pub struct PathBand {
    pub gain: C64,
    pub loc: usize,
    /// Fractional Doppler `a_i`.
    pub frac_doppler: f64,
    pub taps: Vec<C64>,
}

/// Banded representation of `H_eff = sum_i h_i H_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveChannel {
    pub n: usize,
    pub kv: usize,
    pub bands: Vec<PathBand>,
    /// Per-path share of row energy captured by the band.
    pub captured_energy: Vec<f64>,
    /// Warnings, e.g. a band too narrow for a fractional Doppler.
    pub diagnostics: Vec<String>,
}

/// Captured-energy level below which a diagnostic is recorded.
const ENERGY_WARNING: f64 = 0.95;

impl EffectiveChannel {
    pub fn width(&self) -> usize {
        2 * self.kv + 1
    }

    /// Column index of tap `k` (in `-kv..=kv`) on row `p` of band `i`.
    #[inline]
    pub fn column(&self, i: usize, p: usize, k: i64) -> usize {
        (p as i64 + self.bands[i].loc as i64 + k).rem_euclid(self.n as i64) as usize
    }

    /// `H_eff x`.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>, ChannelError> {
        if x.len() != self.n {
            return Err(ChannelError::Dimension { expected: self.n, got: x.len() });
        }
        let (n, w, kv) = (self.n, self.width(), self.kv);
        let mut y = vec![C64::default(); n];
        for band in &self.bands {
            for (p, out) in y.iter_mut().enumerate() {
                let row = &band.taps[p * w..(p + 1) * w];
                let mut col = (p + band.loc + n - kv % n) % n;
                let mut acc = C64::default();
                for t in row {
                    acc += t * x[col];
                    col += 1;
                    if col == n {
                        col = 0;
                    }
                }
                *out += band.gain * acc;
            }
        }
        Ok(y)
    }

    /// Dense row-major `N x N` copy.
    pub fn dense(&self) -> Vec<C64> {
        let (n, w) = (self.n, self.width());
        let mut h = vec![C64::default(); n * n];
        for (i, band) in self.bands.iter().enumerate() {
            for p in 0..n {
                for j in 0..w {
                    let col = self.column(i, p, j as i64 - self.kv as i64);
                    h[p * n + col] += band.gain * band.taps[p * w + j];
                }
            }
        }
        h
    }

    /// True when, in every row, no column is claimed by two bands.
    pub fn bands_disjoint(&self) -> bool {
        let w = self.width();
        let mut owner = vec![usize::MAX; self.n];
        for p in 0..self.n {
            owner.iter_mut().for_each(|o| *o = usize::MAX);
            for i in 0..self.bands.len() {
                for j in 0..w {
                    let col = self.column(i, p, j as i64 - self.kv as i64);
                    if owner[col] != usize::MAX && owner[col] != i {
                        return false;
                    }
                    owner[col] = i;
                }
            }
        }
        true
    }
}

fn row_energy_fraction(path: &PathSpec, p: &DaftParams, taps: &[C64]) -> f64 {
    let band: f64 = taps.iter().map(|t| t.norm_sqr()).sum();
    let full: f64 = if path.delay_frac == 0.0 {
        // integer-delay paths are unitary, so every row has unit energy
        1.0
    } else {
        (0..p.n).map(|col| indicator_phase_entry(path, p, 0, col).norm_sqr()).sum()
    };
    if full > 0.0 {
        band / full
    } else {
        1.0
    }
}

/// Integer-delay band. The Dirichlet factor depends only on the tap offset
/// and the phase splits into a row factor and a column factor, so the band
/// costs `O(N)` transcendental calls instead of `O(N (2kv + 1))`.
fn integer_band_taps(path: &PathSpec, p: &DaftParams, loc: usize, kv: usize) -> Vec<C64> {
    let n = p.n;
    let d = path.delay_int;
    let w = 2 * kv + 1;
    let lead = cis_turns(p.chirp1_turns(d as i64)) / n as f64;
    let col_phase: Vec<C64> =
        (0..n).map(|c| cis_turns(p.chirp2_turns(c as i64) - ((c * d) % n) as f64 / n as f64)).collect();
    let kernel: Vec<C64> = (0..w)
        .map(|j| lead * dirichlet(loc as f64 + j as f64 - kv as f64 - (p.q() * d) as f64 + path.k(n), n))
        .collect();
    let mut taps = Vec::with_capacity(n * w);
    for row in 0..n {
        let rp = cis_turns(-p.chirp2_turns(row as i64));
        let mut col = (row + loc + n - kv % n) % n;
        for k in &kernel {
            taps.push(rp * col_phase[col] * k);
            col += 1;
            if col == n {
                col = 0;
            }
        }
    }
    taps
}

/// Build the per-path DAFT-domain bands of radius `kv`.
///
/// Integer-delay entries use the closed-form Dirichlet kernel; fractional
/// delays use the indicator-phase sum.
pub fn build_daft_matrix(ch: &ChannelRealization, p: &DaftParams, kv: usize) -> Result<EffectiveChannel, ChannelError> {
    p.validate()?;
    let n = p.n;
    if 2 * kv + 1 > n {
        return Err(ChannelError::Domain(format!("band radius {kv} too wide for N = {n}")));
    }
    if kv == 0 && !ch.is_integer_doppler(n) {
        return Err(ChannelError::Domain("kv = 0 requires integer Doppler on every path".into()));
    }
    let w = 2 * kv + 1;
    let mut bands = Vec::with_capacity(ch.len());
    let mut captured = Vec::with_capacity(ch.len());
    let mut diagnostics = Vec::new();
    for (i, path) in ch.paths.iter().enumerate() {
        let loc = path.loc(p);
        let taps = if path.delay_frac == 0.0 {
            integer_band_taps(path, p, loc, kv)
        } else {
            let mut taps = Vec::with_capacity(n * w);
            for row in 0..n {
                for j in 0..w {
                    let col = (row as i64 + loc as i64 + j as i64 - kv as i64).rem_euclid(n as i64) as usize;
                    taps.push(indicator_phase_entry(path, p, row, col));
                }
            }
            taps
        };
        let frac = row_energy_fraction(path, p, &taps[..w]);
        if frac < ENERGY_WARNING {
            diagnostics.push(format!("path {i}: band of radius {kv} captures only {:.4} of the row energy", frac));
        }
        captured.push(frac);
        bands.push(PathBand { gain: path.gain, loc, frac_doppler: path.a(n), taps });
    }
    Ok(EffectiveChannel { n, kv, bands, captured_energy: captured, diagnostics })
}
