use channel_model::EffectiveChannel;
use daft_core::{DaftParams, DaftSignal, C64};
use spread_code_chain::{despread, despread_bits, SpreadingSequence};

use crate::DetectorError;

/// Correlation detector settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CddConfig {
    /// Doppler-spread radius: taps `-kv..=kv` around each path's band
    /// centre are correlated. Zero suffices for integer Doppler.
    pub kv: usize,
}

/// Equalised frame before despreading.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualizedFrame {
    pub x_hat: Vec<C64>,
}

/// Correlation-based equalisation.
///
/// `x_hat = sum_i conj(h_i) sum_{|k| <= kv} Pi^(loc_i + k) (pi_{i,k} . y)`,
/// where `pi_{i,k}[p] = conj(H_i[p, <p + loc_i + k>])` and `Pi^s` moves row
/// `p` to column `<p + s>`. This is the band-restricted `H_eff^H y` and
/// costs `L (2 kv + 1) N` multiply-adds; nothing is inverted.
pub fn cdd_equalize(
    y: &DaftSignal,
    ch: &EffectiveChannel,
    p: &DaftParams,
    cfg: &CddConfig,
) -> Result<EqualizedFrame, DetectorError> {
    let n = ch.n;
    if p.n != n {
        return Err(DetectorError::Dimension { expected: n, got: p.n });
    }
    if y.len() != n {
        return Err(DetectorError::Dimension { expected: n, got: y.len() });
    }
    if cfg.kv > ch.kv {
        return Err(DetectorError::Precondition(format!(
            "detector radius {} exceeds the channel band radius {}",
            cfg.kv, ch.kv
        )));
    }
    let (w, kv) = (ch.width(), ch.kv);
    let lo = kv - cfg.kv;
    let hi = kv + cfg.kv;
    let mut x = vec![C64::default(); n];
    for band in &ch.bands {
        let g = band.gain.conj();
        for (row, yp) in y.bins.iter().enumerate() {
            let gy = g * yp;
            let taps = &band.taps[row * w..(row + 1) * w];
            // first column of the active window, then walk cyclically
            let mut col = (row + band.loc + n - kv + lo) % n;
            for t in &taps[lo..=hi] {
                x[col] += t.conj() * gy;
                col += 1;
                if col == n {
                    col = 0;
                }
            }
        }
    }
    Ok(EqualizedFrame { x_hat: x })
}

/// Symbol-level despreading of an equalised frame, `c_hat[s] = sum_n d[n] x_hat[s Nd + n]`.
pub fn cdd_despread(frame: &EqualizedFrame, seq: &SpreadingSequence) -> Result<Vec<C64>, DetectorError> {
    Ok(despread(&frame.x_hat, seq)?)
}

/// Per-bit correlation statistics for the chip-stream link; positive means 0.
pub fn cdd_despread_bits(frame: &EqualizedFrame, seq: &SpreadingSequence, nm: usize) -> Result<Vec<f64>, DetectorError> {
    Ok(despread_bits(&frame.x_hat, seq, nm)?)
}

/// Dense `H_eff^H y`, restricted to the band, for oracle comparisons.
pub fn dense_adjoint_apply(ch: &EffectiveChannel, y: &[C64]) -> Vec<C64> {
    let n = ch.n;
    let h = ch.dense();
    (0..n).map(|c| (0..n).map(|r| h[r * n + c].conj() * y[r]).sum()).collect()
}
