use serde::{Deserialize, Serialize};

use crate::InterferenceError;

/// One occupied segment of the normalised spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub center: f64,
    pub width: f64,
}

/// A single tone: normalised frequency offset `f_d` (cycles/sample) and phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToneComponent {
    pub f_d: f64,
    pub theta: f64,
}

fn default_filter_len() -> usize {
    129
}

/// The interference families. All frequencies are normalised to the sample
/// rate and lie in `[-1/2, 1/2)`; `pi` is the mean power per sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterferenceSpec {
    /// Sum of tones, each carrying `pi / Ni`.
    Tone { pi: f64, tones: Vec<ToneComponent> },
    /// Linear sweep restarted `ns` times per frame. The instantaneous
    /// frequency within a cycle is `f_m_norm + slope_norm * n'`.
    Sweep { pi: f64, f_m_norm: f64, theta: f64, slope_norm: f64, ns: usize },
    /// White circular Gaussian.
    Broadband { pi: f64 },
    /// White Gaussian through an FIR band filter, then shifted by `f_d`.
    Narrowband1 {
        pi: f64,
        f_d: f64,
        theta: f64,
        bands: Vec<Band>,
        #[serde(default = "default_filter_len")]
        filter_len: usize,
    },
    /// Random PSK symbols held for `ru` samples each, shifted by `f_d`.
    Narrowband2 { pi: f64, f_d: f64, theta: f64, ru: usize, psk_order: usize },
}

fn check_freq(name: &str, f: f64) -> Result<(), InterferenceError> {
    if !(-0.5..0.5).contains(&f) {
        return Err(InterferenceError::Domain(format!("{name} = {f} outside [-1/2, 1/2)")));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<(), InterferenceError> {
    if !v.is_finite() {
        return Err(InterferenceError::Domain(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

impl InterferenceSpec {
    pub fn power(&self) -> f64 {
        match *self {
            InterferenceSpec::Tone { pi, .. }
            | InterferenceSpec::Sweep { pi, .. }
            | InterferenceSpec::Broadband { pi }
            | InterferenceSpec::Narrowband1 { pi, .. }
            | InterferenceSpec::Narrowband2 { pi, .. } => pi,
        }
    }

    /// Same family and parameters at a different power.
    pub fn with_power(&self, new_pi: f64) -> Self {
        let mut s = self.clone();
        match &mut s {
            InterferenceSpec::Tone { pi, .. }
            | InterferenceSpec::Sweep { pi, .. }
            | InterferenceSpec::Broadband { pi }
            | InterferenceSpec::Narrowband1 { pi, .. }
            | InterferenceSpec::Narrowband2 { pi, .. } => *pi = new_pi,
        }
        s
    }

    pub fn single_tone(pi: f64, f_d: f64, theta: f64) -> Self {
        InterferenceSpec::Tone { pi, tones: vec![ToneComponent { f_d, theta }] }
    }

    /// `ni` tones spaced `band.width / ni` apart across `band`, one per
    /// sub-interval centre, with the given phases.
    pub fn multi_tone(pi: f64, band: Band, phases: &[f64]) -> Result<Self, InterferenceError> {
        let ni = phases.len();
        if ni == 0 {
            return Err(InterferenceError::Domain("at least one tone is required".into()));
        }
        let spacing = band.width / ni as f64;
        let lo = band.center - band.width / 2.0;
        let tones = phases
            .iter()
            .enumerate()
            .map(|(k, &theta)| ToneComponent { f_d: lo + (k as f64 + 0.5) * spacing, theta })
            .collect();
        let s = InterferenceSpec::Tone { pi, tones };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), InterferenceError> {
        let pi = self.power();
        if !(pi >= 0.0) || !pi.is_finite() {
            return Err(InterferenceError::Domain(format!("interference power must be finite and non-negative, got {pi}")));
        }
        match self {
            InterferenceSpec::Tone { tones, .. } => {
                if tones.is_empty() {
                    return Err(InterferenceError::Domain("tone list is empty".into()));
                }
                for t in tones {
                    check_freq("tone frequency", t.f_d)?;
                    check_finite("tone phase", t.theta)?;
                }
            }
            InterferenceSpec::Sweep { f_m_norm, theta, slope_norm, ns, .. } => {
                check_freq("sweep start frequency", *f_m_norm)?;
                check_finite("sweep phase", *theta)?;
                check_finite("sweep slope", *slope_norm)?;
                if *ns == 0 {
                    return Err(InterferenceError::Domain("sweep needs at least one cycle per frame".into()));
                }
            }
            InterferenceSpec::Broadband { .. } => {}
            InterferenceSpec::Narrowband1 { f_d, theta, bands, filter_len, .. } => {
                check_freq("narrowband offset", *f_d)?;
                check_finite("narrowband phase", *theta)?;
                if bands.is_empty() {
                    return Err(InterferenceError::Domain("band list is empty".into()));
                }
                for b in bands {
                    check_freq("band centre", b.center)?;
                    if !(b.width > 0.0 && b.width <= 1.0) {
                        return Err(InterferenceError::Domain(format!("band width {} outside (0, 1]", b.width)));
                    }
                }
                if *filter_len == 0 {
                    return Err(InterferenceError::Domain("filter needs at least one tap".into()));
                }
            }
            InterferenceSpec::Narrowband2 { f_d, theta, ru, psk_order, .. } => {
                check_freq("narrowband offset", *f_d)?;
                check_finite("narrowband phase", *theta)?;
                if *ru == 0 {
                    return Err(InterferenceError::Domain("Ru must be at least 1".into()));
                }
                if *psk_order < 2 {
                    return Err(InterferenceError::Domain(format!("PSK order {psk_order} below 2")));
                }
            }
        }
        Ok(())
    }
}
