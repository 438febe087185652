use daft_core::{DaftParams, DaftPlan, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::synth::image_with;
use crate::{classify, matched_slope, predict, ClosedFormPrediction, ImpactClass, InterferenceError, InterferenceSpec};

/// Floor for the dB metric when the error vanishes.
pub const DB_FLOOR: f64 = -300.0;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `sum (|direct| - |pred|)^2 / sum |pred|^2` for one frame.
pub fn magnitude_error(direct: &[C64], predicted: &[f64]) -> f64 {
    let num: f64 = direct.iter().zip(predicted).map(|(d, p)| (d.norm() - p).powi(2)).sum();
    let den: f64 = predicted.iter().map(|p| p * p).sum();
    num / den
}

pub fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        (10.0 * ratio.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// A random frequency `k / n` in `[-1/2, 1/2)`.
fn grid_frequency<R: Rng + ?Sized>(n: usize, rng: &mut R) -> f64 {
    let k = rng.gen_range(0..n);
    if 2 * k >= n {
        (k as f64 - n as f64) / n as f64
    } else {
        k as f64 / n as f64
    }
}

/// Cycle counts `ns` for which a full-band sweep (`slope = ns / N`) is
/// unmatched and its image is exactly flat: `ns` divides `N` with an even
/// cycle length, and the residual chirp rate `ns - 2 N c1` is coprime to `N`.
pub fn flat_sweep_cycles(p: &DaftParams) -> Vec<usize> {
    let q = p.q();
    (2..=p.n)
        .filter(|&ns| p.n % ns == 0 && (p.n / ns) % 2 == 0 && ns != q && gcd(ns.abs_diff(q), p.n) == 1)
        .collect()
}

/// Redraws frequency, phase and (for sweeps) slope while keeping the family,
/// power and impact class of `spec`. Frequencies sit on the subcarrier grid;
/// an unmatched sweep start sits on the coarser `1 / P` grid of its cycle
/// length `P` so the restarts do not add phase jumps.
pub fn randomize<R: Rng + ?Sized>(
    spec: &InterferenceSpec,
    p: &DaftParams,
    rng: &mut R,
) -> Result<InterferenceSpec, InterferenceError> {
    let pi = spec.power();
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    match spec {
        InterferenceSpec::Tone { tones, .. } if tones.len() == 1 => {
            Ok(InterferenceSpec::single_tone(pi, grid_frequency(p.n, rng), theta))
        }
        InterferenceSpec::Sweep { .. } => {
            let (f_m_norm, slope_norm, ns) = match classify(spec, p) {
                ImpactClass::NonStationary => (grid_frequency(p.n, rng), matched_slope(p), 1),
                ImpactClass::Stationary => {
                    let cycles = flat_sweep_cycles(p);
                    if cycles.is_empty() {
                        return Err(InterferenceError::Domain(format!(
                            "no flat full-band sweep exists for N = {} and 2Nc1 = {}",
                            p.n,
                            p.q()
                        )));
                    }
                    let ns = cycles[rng.gen_range(0..cycles.len())];
                    (grid_frequency(p.n / ns, rng), ns as f64 / p.n as f64, ns)
                }
            };
            Ok(InterferenceSpec::Sweep { pi, f_m_norm, theta, slope_norm, ns })
        }
        _ => Err(InterferenceError::Domain(
            "spec has only a statistical prediction; use moment_check".into(),
        )),
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r
}

/// Mean energy-normalised magnitude error between the brute-force image and
/// the closed form, in dB:
/// `10 log10 E[ sum_m (|J(m)| - |J_pred(m)|)^2 / sum_m |J_pred(m)|^2 ]`.
/// Each trial redraws the spec through [`randomize`]. Floors at
/// [`DB_FLOOR`].
pub fn relative_error_db(spec: &InterferenceSpec, p: &DaftParams, trials: usize, seed: u64) -> Result<f64, InterferenceError> {
    spec.validate()?;
    if trials == 0 {
        return Err(InterferenceError::Domain("at least one trial is required".into()));
    }
    if spec.power() <= 0.0 {
        return Err(InterferenceError::Domain("relative error is undefined at zero power".into()));
    }
    let plan = DaftPlan::new(*p)?;
    let mut acc = 0.0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let s = randomize(spec, p, &mut rng)?;
        let pred = predict(&s, p).magnitudes(p.n).expect("randomized specs are deterministic");
        let img = image_with(&s, &plan, &mut rng)?;
        acc += magnitude_error(&img, &pred);
    }
    Ok(to_db(acc / trials as f64))
}

/// Worst-bin deviations of the empirical DAFT-domain moments from the
/// predicted `(0, Pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// `max_m |mean_m|`.
    pub mean_err: f64,
    /// `max_m |E|J(m)|^2 - Pi| / Pi` (zero when `Pi = 0`).
    pub var_rel_err: f64,
    /// Standard error of a single-bin mean, `sqrt(Pi / trials)`.
    pub mean_sigma: f64,
}

pub fn moment_check(spec: &InterferenceSpec, p: &DaftParams, trials: usize, seed: u64) -> Result<MomentReport, InterferenceError> {
    spec.validate()?;
    if trials == 0 {
        return Err(InterferenceError::Domain("at least one trial is required".into()));
    }
    let ClosedFormPrediction::GaussianStats { var, .. } = predict(spec, p) else {
        return Err(InterferenceError::Domain("spec has a deterministic prediction; use relative_error_db".into()));
    };
    let plan = DaftPlan::new(*p)?;
    let mut sum = vec![C64::new(0.0, 0.0); p.n];
    let mut sq = vec![0.0; p.n];
    for t in 0..trials {
        let img = image_with(spec, &plan, &mut trial_rng(seed, t as u64))?;
        for ((s, q), v) in sum.iter_mut().zip(&mut sq).zip(&img) {
            *s += v;
            *q += v.norm_sqr();
        }
    }
    let tf = trials as f64;
    let mean_err = sum.iter().map(|s| (s / tf).norm()).fold(0.0, f64::max);
    let var_rel_err = if var > 0.0 { sq.iter().map(|q| (q / tf - var).abs() / var).fold(0.0, f64::max) } else { 0.0 };
    Ok(MomentReport { mean_err, var_rel_err, mean_sigma: (var / tf).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_comparison_hits_floor() {
        let pred = vec![1.0; 8];
        let direct: Vec<C64> = pred.iter().map(|&a| C64::new(0.0, a)).collect();
        assert_eq!(to_db(magnitude_error(&direct, &pred)), DB_FLOOR);
    }

    #[test]
    fn flat_cycle_set_for_default_frame() {
        let p = DaftParams::new(992, 5.0 / 1984.0, 0.0, 69).unwrap();
        assert_eq!(flat_sweep_cycles(&p), vec![2, 4, 8, 16, 62, 124, 248, 496]);
    }

    #[test]
    fn gaussian_specs_are_rejected() {
        let p = DaftParams::new(64, 1.0 / 128.0, 0.0, 8).unwrap();
        assert!(relative_error_db(&InterferenceSpec::Broadband { pi: 1.0 }, &p, 1, 0).is_err());
        assert!(moment_check(&InterferenceSpec::single_tone(1.0, 0.0, 0.0), &p, 1, 0).is_err());
    }

    #[test]
    fn zero_power_moments_are_exact() {
        let p = DaftParams::new(64, 1.0 / 128.0, 0.0, 8).unwrap();
        let r = moment_check(&InterferenceSpec::Broadband { pi: 0.0 }, &p, 10, 0).unwrap();
        assert_eq!((r.mean_err, r.var_rel_err), (0.0, 0.0));
    }
}
