use std::f64::consts::{PI, TAU};

use daft_core::{cis_turns, DaftParams, DaftPlan, DaftSignal, TimeSignal, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Band, InterferenceError, InterferenceSpec};

fn cn01<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Band-pass FIR taps: Hamming-windowed sinc per band, modulated to the
/// band centre, summed and scaled to unit energy.
pub fn band_filter(bands: &[Band], len: usize) -> Vec<C64> {
    let c = (len as f64 - 1.0) / 2.0;
    let mut h: Vec<C64> = (0..len)
        .map(|k| {
            let t = k as f64 - c;
            let w = if len > 1 { 0.54 - 0.46 * (TAU * k as f64 / (len as f64 - 1.0)).cos() } else { 1.0 };
            bands
                .iter()
                .map(|b| {
                    let x = b.width * t;
                    let sinc = if x == 0.0 { 1.0 } else { (PI * x).sin() / (PI * x) };
                    cis_turns(b.center * t) * (b.width * sinc)
                })
                .sum::<C64>()
                * w
        })
        .collect();
    let e = h.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if e > 0.0 {
        h.iter_mut().for_each(|v| *v /= e);
    }
    h
}

/// `n` samples of the interference, drawing randomness from `rng`.
pub fn synth_with<R: Rng + ?Sized>(spec: &InterferenceSpec, n: usize, rng: &mut R) -> Result<TimeSignal, InterferenceError> {
    spec.validate()?;
    let amp = spec.power().sqrt();
    let samples = match spec {
        InterferenceSpec::Tone { tones, .. } => {
            let a = amp / (tones.len() as f64).sqrt();
            (0..n)
                .map(|k| {
                    tones
                        .iter()
                        .map(|t| cis_turns(t.f_d * k as f64 + t.theta / TAU))
                        .sum::<C64>()
                        * a
                })
                .collect()
        }
        InterferenceSpec::Sweep { f_m_norm, theta, slope_norm, ns, .. } => {
            let period = n as f64 / *ns as f64;
            (0..n)
                .map(|k| {
                    let t = (k as f64) % period;
                    cis_turns(f_m_norm * t + 0.5 * slope_norm * t * t + theta / TAU) * amp
                })
                .collect()
        }
        InterferenceSpec::Broadband { .. } => (0..n).map(|_| cn01(rng) * amp).collect(),
        InterferenceSpec::Narrowband1 { f_d, theta, bands, filter_len, .. } => {
            let h = band_filter(bands, *filter_len);
            let z: Vec<C64> = (0..n + h.len() - 1).map(|_| cn01(rng)).collect();
            (0..n)
                .map(|k| {
                    // z is offset so that z[k + len - 1 - j] is the sample j steps back
                    let acc: C64 = h.iter().enumerate().map(|(j, hj)| hj * z[k + h.len() - 1 - j]).sum();
                    acc * cis_turns(f_d * k as f64 + theta / TAU) * amp
                })
                .collect()
        }
        InterferenceSpec::Narrowband2 { f_d, theta, ru, psk_order, .. } => {
            let mut out = Vec::with_capacity(n);
            let mut sym = C64::new(0.0, 0.0);
            for k in 0..n {
                if k % ru == 0 {
                    sym = cis_turns(rng.gen_range(0..*psk_order) as f64 / *psk_order as f64);
                }
                out.push(sym * cis_turns(f_d * k as f64 + theta / TAU) * amp);
            }
            out
        }
    };
    Ok(TimeSignal::new(samples))
}

/// Seeded synthesis of one frame of `n` samples.
pub fn synth(spec: &InterferenceSpec, n: usize, seed: u64) -> Result<TimeSignal, InterferenceError> {
    synth_with(spec, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Brute-force DAFT-domain image: synthesis followed by the transform.
pub fn daft_image(spec: &InterferenceSpec, p: &DaftParams, seed: u64) -> Result<DaftSignal, InterferenceError> {
    let x = synth(spec, p.n, seed)?;
    Ok(daft_core::daft(&x, p)?)
}

pub(crate) fn image_with<R: Rng + ?Sized>(
    spec: &InterferenceSpec,
    plan: &DaftPlan,
    rng: &mut R,
) -> Result<Vec<C64>, InterferenceError> {
    let mut x = synth_with(spec, plan.n(), rng)?.samples;
    plan.forward_in_place(&mut x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dc_tone_is_constant() {
        let x = synth(&InterferenceSpec::single_tone(1.0, 0.0, 0.0), 64, 0).unwrap();
        assert!(x.samples.iter().all(|v| (v - C64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn filter_has_unit_energy() {
        let h = band_filter(&[Band { center: 0.1, width: 0.2 }, Band { center: -0.3, width: 0.05 }], 129);
        assert!((h.iter().map(|v| v.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn filter_passes_band_and_rejects_outside() {
        let h = band_filter(&[Band { center: 0.2, width: 0.1 }], 129);
        let resp = |f: f64| h.iter().enumerate().map(|(k, v)| v * cis_turns(-f * k as f64)).sum::<C64>().norm();
        assert!(resp(0.2) > 100.0 * resp(-0.2));
    }

    #[test]
    fn psk_runs() {
        let s = InterferenceSpec::Narrowband2 { pi: 1.0, f_d: 0.0, theta: 0.0, ru: 8, psk_order: 4 };
        let x = synth(&s, 64, 3).unwrap().samples;
        for run in x.chunks(8) {
            assert!(run.iter().all(|v| (v - run[0]).norm() == 0.0));
        }
    }

    #[test]
    fn zero_power_is_silent() {
        let p = DaftParams::with_default_chirps(64, 8, 2.0 / 64.0).unwrap();
        let img = daft_image(&InterferenceSpec::Broadband { pi: 0.0 }, &p, 1).unwrap();
        assert!(img.bins.iter().all(|v| v.norm() == 0.0));
    }
}
