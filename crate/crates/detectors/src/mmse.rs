use channel_model::EffectiveChannel;
use daft_core::{DaftSignal, C64};
use nalgebra::{DMatrix, DVector};
use spread_code_chain::{despread, SpreadingSequence};

use crate::{DetectorError, EqualizedFrame};

/// Factorised linear MMSE filter for one channel realisation.
///
/// `x_hat = H^H (H H^H + Pn I)^-1 y`. Building it is `O(N^3)`; each
/// subsequent frame costs one triangular solve pair.
pub struct MmseFilter {
    h: DMatrix<C64>,
    lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl MmseFilter {
    pub fn new(ch: &EffectiveChannel, pn: f64) -> Result<Self, DetectorError> {
        if !(pn > 0.0) || !pn.is_finite() {
            return Err(DetectorError::Precondition(format!("noise power must be positive, got {pn}")));
        }
        let n = ch.n;
        let h = DMatrix::from_row_slice(n, n, &ch.dense());
        let mut g = &h * h.adjoint();
        for i in 0..n {
            g[(i, i)] += C64::new(pn, 0.0);
        }
        Ok(Self { h, lu: g.lu() })
    }

    pub fn equalize(&self, y: &DaftSignal) -> Result<EqualizedFrame, DetectorError> {
        let n = self.h.nrows();
        if y.len() != n {
            return Err(DetectorError::Dimension { expected: n, got: y.len() });
        }
        let z = self
            .lu
            .solve(&DVector::from_column_slice(&y.bins))
            .ok_or_else(|| DetectorError::Numerical("MMSE system is singular".into()))?;
        let x = self.h.adjoint() * z;
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(DetectorError::Numerical("non-finite MMSE estimate".into()));
        }
        Ok(EqualizedFrame { x_hat: x.iter().copied().collect() })
    }
}

/// One-shot MMSE equalisation followed by symbol-level despreading.
pub fn mmse_detect(
    y: &DaftSignal,
    ch: &EffectiveChannel,
    pn: f64,
    seq: &SpreadingSequence,
) -> Result<Vec<C64>, DetectorError> {
    let f = MmseFilter::new(ch, pn)?.equalize(y)?;
    Ok(despread(&f.x_hat, seq)?)
}
