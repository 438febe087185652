use daft_core::{cis_turns, DaftParams, C64};

use crate::{fractional_delay_kernel, ChannelRealization, PathSpec};

/// How a fractional delay enters the dense reference matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DelayModel {
    /// The indicator-phase construction: each chirp subcarrier is delayed
    /// with its instantaneous frequency folded into `(0, 1]` cycles/sample.
    IndicatorPhase,
    /// The windowed-sinc interpolator used by the time-domain path.
    Interpolated,
}

/// Fold index `epsilon(n, l)` for column `q` and folded time `n' = <n - d>_N`:
/// the `x` with `x N < q + 2Nc1 n' <= (x + 1) N`, or 0 when `q + 2Nc1 n' = 0`.
pub fn indicator_epsilon(q: usize, n_prime: usize, p: &DaftParams) -> usize {
    let v = q + p.q() * n_prime;
    if v == 0 {
        0
    } else {
        (v - 1) / p.n
    }
}

/// Number of `(q, x)` pairs, `x` in `0..=2Nc1`, whose indicator interval is
/// empty. Zero-phase pairs contribute nothing to the fractional-delay sum.
pub fn count_empty_indicator_intervals(p: &DaftParams) -> usize {
    let qq = p.q();
    let mut empty = 0;
    let mut hit = vec![false; qq + 1];
    for q in 0..p.n {
        hit.iter_mut().for_each(|h| *h = false);
        for np in 0..p.n {
            let v = q + qq * np;
            if v > 0 {
                hit[(v - 1) / p.n] = true;
            }
        }
        empty += hit.iter().filter(|h| !**h).count();
    }
    empty
}

/// `sum_{n<N} exp(j2pi phi n / N)`, evaluated in closed form. Integer `phi`
/// gives exactly `N` or `0`.
pub(crate) fn dirichlet(phi: f64, n: usize) -> C64 {
    let nf = n as f64;
    let r = phi - nf * (phi / nf).round();
    if (phi - phi.round()).abs() < 1e-12 {
        return if r.abs() < 0.5 { C64::new(nf, 0.0) } else { C64::default() };
    }
    (C64::new(1.0, 0.0) - cis_turns(phi)) / (C64::new(1.0, 0.0) - cis_turns(r / nf))
}

/// Closed-form entry `H_i[row, col]` of an integer-delay path.
#[cfg(test)]
pub(crate) fn integer_delay_entry(path: &PathSpec, p: &DaftParams, row: usize, col: usize) -> C64 {
    let n = p.n;
    let d = path.delay_int;
    let turns = p.chirp1_turns(d as i64) - ((col * d) % n) as f64 / n as f64 + p.chirp2_turns(col as i64)
        - p.chirp2_turns(row as i64);
    let phi = col as f64 - row as f64 - (p.q() * d) as f64 + path.k(n);
    cis_turns(turns) * dirichlet(phi, n) / n as f64
}

/// Entry of a path with fractional delay under the indicator-phase model,
/// summed term by term over `n`.
pub(crate) fn indicator_phase_entry(path: &PathSpec, p: &DaftParams, row: usize, col: usize) -> C64 {
    let n = p.n;
    let nf = n as f64;
    let l = path.delay();
    let qq = p.q() as f64;
    let turns = p.c1 * l * l - col as f64 * l / nf + p.chirp2_turns(col as i64) - p.chirp2_turns(row as i64);
    let slope = (col as f64 - row as f64 - qq * l + path.k(n)) / nf;
    let sum: C64 = (0..n)
        .map(|t| {
            let np = (t as i64 - path.delay_int as i64).rem_euclid(n as i64) as usize;
            let eps = indicator_epsilon(col, np, p) as f64;
            cis_turns(slope * t as f64 + path.delay_frac * eps)
        })
        .sum();
    cis_turns(turns) * sum / nf
}

fn interpolated_entry(path: &PathSpec, p: &DaftParams, row: usize, col: usize) -> C64 {
    let n = p.n;
    let nf = n as f64;
    let scale = 1.0 / nf;
    // basis_q(t) = exp(j2pi (c1 t^2 + q t / N + c2 q^2)); valid for any integer t
    let basis = |t: i64| cis_turns(p.chirp1_turns(t) + (col as i64 * t).rem_euclid(n as i64) as f64 / nf);
    let mut acc = C64::default();
    for t in 0..n as i64 {
        let analysis = cis_turns(-(((row as i64 * t) % n as i64) as f64 / nf + p.chirp1_turns(t)));
        let doppler = cis_turns(path.doppler_norm * t as f64);
        let delayed = if path.delay_frac == 0.0 {
            basis(t - path.delay_int as i64)
        } else {
            let pos = t as f64 - path.delay();
            let base = pos.floor() as i64;
            (base - 7..=base + 8).map(|k| basis(k) * fractional_delay_kernel(pos - k as f64)).sum()
        };
        acc += analysis * doppler * delayed;
    }
    acc * scale * cis_turns(p.chirp2_turns(col as i64) - p.chirp2_turns(row as i64))
}

/// Full `N x N` matrix `sum_i h_i H_i`, row-major, built entry by entry
/// from explicit sums over time. Integer-delay paths agree under both
/// delay models.
pub fn brute_force_matrix(ch: &ChannelRealization, p: &DaftParams, model: DelayModel) -> Vec<C64> {
    let n = p.n;
    let mut h = vec![C64::default(); n * n];
    for path in &ch.paths {
        for row in 0..n {
            for col in 0..n {
                let e = match (model, path.delay_frac == 0.0) {
                    (DelayModel::Interpolated, _) => interpolated_entry(path, p, row, col),
                    (DelayModel::IndicatorPhase, true) => direct_integer_entry(path, p, row, col),
                    (DelayModel::IndicatorPhase, false) => indicator_phase_entry(path, p, row, col),
                };
                h[row * n + col] += path.gain * e;
            }
        }
    }
    h
}

/// Integer-delay entry with the inner sum over `n` carried out literally.
fn direct_integer_entry(path: &PathSpec, p: &DaftParams, row: usize, col: usize) -> C64 {
    let n = p.n;
    let nf = n as f64;
    let d = path.delay_int;
    let turns = p.chirp1_turns(d as i64) - ((col * d) % n) as f64 / nf + p.chirp2_turns(col as i64)
        - p.chirp2_turns(row as i64);
    let slope = (col as f64 - row as f64 - (p.q() * d) as f64 + path.k(n)) / nf;
    let sum: C64 = (0..n).map(|t| cis_turns(slope * t as f64)).sum();
    cis_turns(turns) * sum / nf
}
