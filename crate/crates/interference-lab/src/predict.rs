use daft_core::DaftParams;
use serde::{Deserialize, Serialize};

use crate::{ImpactClass, InterferenceSpec};

/// What the closed forms say about the DAFT image of a spec.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ClosedFormPrediction {
    /// `|J(m)| = amp` at every bin, phases uniform.
    PerBinAmplitude { amp: f64 },
    /// All energy at one bin with magnitude `amp`.
    ConcentratedBin { bin: usize, amp: f64 },
    /// Per-bin circular statistics.
    GaussianStats { mean: f64, var: f64 },
}

impl ClosedFormPrediction {
    /// Predicted `|J(m)|` for every bin, when the prediction is deterministic.
    pub fn magnitudes(&self, n: usize) -> Option<Vec<f64>> {
        match *self {
            ClosedFormPrediction::PerBinAmplitude { amp } => Some(vec![amp; n]),
            ClosedFormPrediction::ConcentratedBin { bin, amp } => {
                let mut v = vec![0.0; n];
                v[bin % n] = amp;
                Some(v)
            }
            ClosedFormPrediction::GaussianStats { .. } => None,
        }
    }
}

/// Slope at which a sweep tracks the DAFT chirp: the subcarrier phase
/// `2 pi c1 n^2` has instantaneous frequency `2 c1 n`.
pub fn matched_slope(p: &DaftParams) -> f64 {
    2.0 * p.c1
}

pub fn classify(spec: &InterferenceSpec, p: &DaftParams) -> ImpactClass {
    match *spec {
        InterferenceSpec::Sweep { slope_norm, .. } => {
            let m = matched_slope(p);
            if (slope_norm - m).abs() <= 1e-9 * m.abs().max(slope_norm.abs()) {
                ImpactClass::NonStationary
            } else {
                ImpactClass::Stationary
            }
        }
        _ => ImpactClass::Stationary,
    }
}

/// Bin hit by a matched sweep starting at `f_m`: `round(N <f_m>_1) mod N`.
pub fn matched_bin(f_m_norm: f64, n: usize) -> usize {
    let frac = f_m_norm - f_m_norm.floor();
    ((frac * n as f64).round() as usize) % n
}

pub fn predict(spec: &InterferenceSpec, p: &DaftParams) -> ClosedFormPrediction {
    let pi = spec.power();
    match spec {
        InterferenceSpec::Tone { tones, .. } if tones.len() == 1 => ClosedFormPrediction::PerBinAmplitude { amp: pi.sqrt() },
        InterferenceSpec::Sweep { f_m_norm, .. } => match classify(spec, p) {
            ImpactClass::NonStationary => ClosedFormPrediction::ConcentratedBin {
                bin: matched_bin(*f_m_norm, p.n),
                amp: (p.n as f64 * pi).sqrt(),
            },
            ImpactClass::Stationary => ClosedFormPrediction::PerBinAmplitude { amp: pi.sqrt() },
        },
        _ => ClosedFormPrediction::GaussianStats { mean: 0.0, var: pi },
    }
}
