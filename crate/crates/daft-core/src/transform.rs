use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::{cis_turns, DaftError, DaftParams, DaftSignal, TimeSignal, C64};

/// Precomputed fast DAFT: chirp multiply, FFT, chirp multiply.
///
/// Cheap to clone; the FFT plans are shared.
#[derive(Clone)]
pub struct DaftPlan {
    params: DaftParams,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    chirp1: Vec<C64>,
    chirp2: Vec<C64>,
    scale: f64,
}

impl std::fmt::Debug for DaftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DaftPlan").field("params", &self.params).finish()
    }
}

impl DaftPlan {
    pub fn new(params: DaftParams) -> Result<Self, DaftError> {
        params.validate()?;
        let n = params.n;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        // e^{-j2pi c1 n^2} and e^{-j2pi c2 m^2}
        let chirp1 = (0..n as i64).map(|k| cis_turns(-params.chirp1_turns(k))).collect();
        let chirp2 = (0..n as i64).map(|k| cis_turns(-params.chirp2_turns(k))).collect();
        Ok(Self { params, fwd, inv, chirp1, chirp2, scale: 1.0 / (n as f64).sqrt() })
    }

    pub fn params(&self) -> &DaftParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    fn check(&self, len: usize) -> Result<(), DaftError> {
        if len != self.params.n {
            return Err(DaftError::Dimension { expected: self.params.n, got: len });
        }
        Ok(())
    }

    /// In-place DAFT of one unprefixed frame.
    pub fn forward_in_place(&self, buf: &mut [C64]) -> Result<(), DaftError> {
        self.check(buf.len())?;
        for (v, c) in buf.iter_mut().zip(&self.chirp1) {
            *v *= c;
        }
        self.fwd.process(buf);
        for (v, c) in buf.iter_mut().zip(&self.chirp2) {
            *v *= c * self.scale;
        }
        Ok(())
    }

    /// In-place IDAFT.
    pub fn inverse_in_place(&self, buf: &mut [C64]) -> Result<(), DaftError> {
        self.check(buf.len())?;
        for (v, c) in buf.iter_mut().zip(&self.chirp2) {
            *v *= c.conj();
        }
        self.inv.process(buf);
        for (v, c) in buf.iter_mut().zip(&self.chirp1) {
            *v *= c.conj() * self.scale;
        }
        Ok(())
    }

    pub fn forward(&self, x: &[C64]) -> Result<Vec<C64>, DaftError> {
        let mut buf = x.to_vec();
        self.forward_in_place(&mut buf)?;
        Ok(buf)
    }

    pub fn inverse(&self, x: &[C64]) -> Result<Vec<C64>, DaftError> {
        let mut buf = x.to_vec();
        self.inverse_in_place(&mut buf)?;
        Ok(buf)
    }
}

/// DAFT of an unprefixed time-domain frame.
pub fn daft(x: &TimeSignal, p: &DaftParams) -> Result<DaftSignal, DaftError> {
    if x.prefixed {
        return Err(DaftError::Domain("daft expects an unprefixed frame; strip the prefix first".into()));
    }
    Ok(DaftSignal::new(DaftPlan::new(*p)?.forward(&x.samples)?))
}

/// Inverse DAFT; the result is unprefixed.
pub fn idaft(x: &DaftSignal, p: &DaftParams) -> Result<TimeSignal, DaftError> {
    Ok(TimeSignal::new(DaftPlan::new(*p)?.inverse(&x.bins)?))
}

/// Direct O(N^2) evaluation of the forward transform, kept as a reference.
pub fn daft_direct(x: &[C64], p: &DaftParams) -> Result<Vec<C64>, DaftError> {
    p.validate()?;
    let n = p.n;
    if x.len() != n {
        return Err(DaftError::Dimension { expected: n, got: x.len() });
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok((0..n)
        .map(|m| {
            let acc: C64 = x
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let lin = ((m * k) % n) as f64 / n as f64;
                    v * cis_turns(-(lin + p.chirp1_turns(k as i64)))
                })
                .sum();
            acc * cis_turns(-p.chirp2_turns(m as i64)) * scale
        })
        .collect())
}

/// Direct O(N^2) inverse transform.
pub fn idaft_direct(x: &[C64], p: &DaftParams) -> Result<Vec<C64>, DaftError> {
    p.validate()?;
    let n = p.n;
    if x.len() != n {
        return Err(DaftError::Dimension { expected: n, got: x.len() });
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok((0..n)
        .map(|k| {
            let acc: C64 = x
                .iter()
                .enumerate()
                .map(|(m, &v)| {
                    let lin = ((m * k) % n) as f64 / n as f64;
                    v * cis_turns(lin + p.chirp2_turns(m as i64))
                })
                .sum();
            acc * cis_turns(p.chirp1_turns(k as i64)) * scale
        })
        .collect())
}
