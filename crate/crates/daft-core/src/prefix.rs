use crate::{cis_turns, DaftError, DaftParams, TimeSignal, C64};

/// Sample `n` (any integer) of the chirp-periodic extension of one frame.
///
/// The IDAFT sum is N-periodic in `n`, so every sample outside `[0, N)`
/// equals the folded sample times `exp(j2pi c1 (n^2 - <n>^2))`.
pub fn chirp_periodic_sample(body: &[C64], p: &DaftParams, n: i64) -> C64 {
    let len = body.len() as i64;
    let r = n.rem_euclid(len);
    if r == n {
        return body[r as usize];
    }
    body[r as usize] * cis_turns(p.chirp1_turns(n) - p.chirp1_turns(r))
}

/// Prepend the chirp-periodic prefix:
/// `out[i] = x[N - Ncp + i] * exp(-j2pi c1 (N^2 + 2N (i - Ncp)))` for `i < Ncp`.
pub fn append_cpp(x: &TimeSignal, p: &DaftParams) -> Result<TimeSignal, DaftError> {
    if x.prefixed {
        return Err(DaftError::Domain("signal already carries a prefix".into()));
    }
    if x.len() != p.n {
        return Err(DaftError::Dimension { expected: p.n, got: x.len() });
    }
    let mut out = Vec::with_capacity(p.n + p.ncp);
    let ncp = p.ncp as i64;
    out.extend((-ncp..0).map(|k| chirp_periodic_sample(&x.samples, p, k)));
    out.extend_from_slice(&x.samples);
    Ok(TimeSignal { samples: out, prefixed: true })
}

/// Drop the first `Ncp` samples.
pub fn strip_cpp(x: &TimeSignal, p: &DaftParams) -> Result<TimeSignal, DaftError> {
    if !x.prefixed {
        return Err(DaftError::Domain("signal carries no prefix".into()));
    }
    if x.len() != p.n + p.ncp {
        return Err(DaftError::Dimension { expected: p.n + p.ncp, got: x.len() });
    }
    Ok(TimeSignal::new(x.samples[p.ncp..].to_vec()))
}
