use daft_core::{chirp_periodic_sample, cis_turns, DaftParams, TimeSignal, C64};

use crate::{ChannelError, ChannelRealization};

/// Half-width, in samples, of the fractional-delay interpolator (16 taps).
pub const KERNEL_HALF_WIDTH: f64 = 8.0;
const KAISER_BETA: f64 = 6.0;

fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let q = x * x / 4.0;
    for k in 1..64 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Kaiser-windowed sinc used for fractional delays; zero for `|u| >= 8`.
pub fn fractional_delay_kernel(u: f64) -> f64 {
    if u.abs() >= KERNEL_HALF_WIDTH {
        return 0.0;
    }
    let sinc = if u == 0.0 { 1.0 } else { (std::f64::consts::PI * u).sin() / (std::f64::consts::PI * u) };
    let r = u / KERNEL_HALF_WIDTH;
    sinc * bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / bessel_i0(KAISER_BETA)
}

/// Pass a prefixed frame through the channel:
/// `y[n] = sum_i h_i exp(j2pi v_i n) x[n - l_i]`, with `n = 0` at the first
/// sample after the prefix.
///
/// Samples needed from before the start of the buffer are taken from the
/// chirp-periodic extension of the frame body, i.e. the frame is treated as
/// one period of its own extension. Fractional delays use a 16-tap
/// Kaiser-windowed sinc.
pub fn apply_time_domain(
    x: &TimeSignal,
    ch: &ChannelRealization,
    p: &DaftParams,
) -> Result<TimeSignal, ChannelError> {
    if !x.prefixed {
        return Err(ChannelError::Domain("channel input must carry its prefix".into()));
    }
    let (n, ncp) = (p.n, p.ncp);
    if x.len() != n + ncp {
        return Err(ChannelError::Dimension { expected: n + ncp, got: x.len() });
    }
    let max_delay = ch.max_delay_int();
    if ncp < max_delay + 1 {
        return Err(ChannelError::InsufficientPrefix { ncp, delay: max_delay });
    }
    let body = &x.samples[ncp..];
    let fetch = |t: i64| -> C64 {
        if t >= -(ncp as i64) && t < n as i64 {
            x.samples[(t + ncp as i64) as usize]
        } else {
            chirp_periodic_sample(body, p, t)
        }
    };

    let mut out = vec![C64::default(); n + ncp];
    for path in &ch.paths {
        if path.gain == C64::default() {
            continue;
        }
        let d = path.delay_int as i64;
        for (j, y) in out.iter_mut().enumerate() {
            let t = j as i64 - ncp as i64;
            let doppler = cis_turns(path.doppler_norm * t as f64);
            let s = if path.delay_frac == 0.0 {
                fetch(t - d)
            } else {
                let pos = t as f64 - path.delay();
                let base = pos.floor() as i64;
                (base - 7..=base + 8)
                    .map(|k| fetch(k) * fractional_delay_kernel(pos - k as f64))
                    .sum()
            };
            *y += path.gain * doppler * s;
        }
    }
    Ok(TimeSignal { samples: out, prefixed: true })
}
