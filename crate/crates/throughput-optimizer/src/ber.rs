use interference_lab::ImpactClass;
use statrs::function::factorial::binomial;

use crate::{AnalyticContext, OptimizerError};

/// `F(Nd)` with its first two derivatives in `Nd`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FValue {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
}

impl std::ops::Add for FValue {
    type Output = FValue;
    fn add(self, o: FValue) -> FValue {
        FValue { f: self.f + o.f, f1: self.f1 + o.f1, f2: self.f2 + o.f2 }
    }
}

const ZERO: FValue = FValue { f: 0.0, f1: 0.0, f2: 0.0 };

/// A positive term `T = exp(lt)` with `lt' = d1`, `lt'' = d2`:
/// `T' = T d1`, `T'' = T (d2 + d1^2)`.
fn term(lt: f64, d1: f64, d2: f64) -> FValue {
    let t = lt.exp();
    FValue { f: t, f1: t * d1, f2: t * (d2 + d1 * d1) }
}

/// `sum_i C(2i, i) (g / (4 Nd))^i (Nd / (Nd + g))^(i + 1/2)` and
/// derivatives, with `g` independent of `Nd`. Each term is
/// `C(2i,i) (g/4)^i Nd^(1/2) (Nd + g)^-(i + 1/2)`.
pub fn theta(nd: f64, g: f64, l: usize) -> FValue {
    let s = nd + g;
    (0..l)
        .filter(|&i| i == 0 || g > 0.0)
        .map(|i| {
            let fi = i as f64;
            let c = binomial(2 * i as u64, i as u64).ln() + if i > 0 { fi * (g / 4.0).ln() } else { 0.0 };
            let lt = c + 0.5 * nd.ln() - (fi + 0.5) * s.ln();
            let d1 = 0.5 / nd - (fi + 0.5) / s;
            let d2 = -0.5 / (nd * nd) + (fi + 0.5) / (s * s);
            term(lt, d1, d2)
        })
        .fold(ZERO, |a, b| a + b)
}

/// The matched-bin kernel: `sum_i C(2i, i) (gm / (4 Nd^3))^i
/// (Nd^3 / (Nd^3 + gm))^(i + 1/2)` with `gm = gi + gn Nd^2`. Each term is
/// `C(2i,i) 4^-i gm^i Nd^(3/2) S^-(i + 1/2)`, `S = Nd^3 + gm`.
pub fn psi_matched(nd: f64, gi: f64, gn: f64, l: usize) -> FValue {
    let gm = gi + gn * nd * nd;
    let (gm1, gm2) = (2.0 * gn * nd, 2.0 * gn);
    let s = nd.powi(3) + gm;
    let (s1, s2) = (3.0 * nd * nd + gm1, 6.0 * nd + gm2);
    (0..l)
        .filter(|&i| i == 0 || gm > 0.0)
        .map(|i| {
            let fi = i as f64;
            let mut lt = binomial(2 * i as u64, i as u64).ln() + 1.5 * nd.ln() - (fi + 0.5) * s.ln();
            let mut d1 = 1.5 / nd - (fi + 0.5) * s1 / s;
            let mut d2 = -1.5 / (nd * nd) - (fi + 0.5) * (s2 / s - (s1 / s).powi(2));
            if i > 0 {
                lt += fi * (gm / 4.0).ln();
                d1 += fi * gm1 / gm;
                d2 += fi * (gm2 / gm - (gm1 / gm).powi(2));
            }
            term(lt, d1, d2)
        })
        .fold(ZERO, |a, b| a + b)
}

/// `F(Nd)`: the stationary kernel at `gamma_in`, or the non-stationary
/// mixture `R Psi_2 + (1 - R) Psi_1` with `R = Nd / (N log2 Nm)` clamped to
/// one. Derivatives are exact closed forms.
pub fn f_value(nd: f64, ctx: &AnalyticContext) -> FValue {
    let l = ctx.sys.l;
    match ctx.impact {
        ImpactClass::Stationary => theta(nd, ctx.gamma_in(), l),
        ImpactClass::NonStationary => {
            let p1 = theta(nd, ctx.gamma_n(), l);
            let p2 = psi_matched(nd, ctx.gamma_i(), ctx.gamma_n(), l);
            let m = ctx.sys.chips_per_frame();
            if nd >= m {
                return p2;
            }
            let r = nd / m;
            FValue {
                f: r * p2.f + (1.0 - r) * p1.f,
                f1: (p2.f - p1.f) / m + r * p2.f1 + (1.0 - r) * p1.f1,
                f2: 2.0 * (p2.f1 - p1.f1) / m + r * p2.f2 + (1.0 - r) * p1.f2,
            }
        }
    }
}

/// Pre-decoding bit error rate `(1 - F(Nd)) / 2`, clamped to `[0, 1/2]`.
pub fn ber_before_decoding(nd: f64, ctx: &AnalyticContext) -> Result<f64, OptimizerError> {
    if !(nd >= 1.0) {
        return Err(OptimizerError::Domain(format!("spreading length must be at least 1, got {nd}")));
    }
    Ok((0.5 * (1.0 - f_value(nd, ctx).f)).clamp(0.0, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{LinkBudget, SystemParams};

    fn central(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-4 * x;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn single_path_unity_snr() {
        // L = 1, gamma = Nd: (1 - sqrt(1/2)) / 2
        let v = theta(7.0, 7.0, 1);
        assert!((0.5 * (1.0 - v.f) - 0.146_446_609_406_726_24).abs() < 1e-15);
    }

    #[test]
    fn single_path_derivative_is_symbolic() {
        // d/dx sqrt(x / (x + g)) = g / (2 sqrt(x) (x + g)^(3/2))
        for &(x, g) in &[(1.0, 3.0), (10.0, 2.5), (300.0, 40.0)] {
            let v = theta(x, g, 1);
            let want = g / (2.0 * x.sqrt() * (x + g).powf(1.5));
            assert!((v.f1 - want).abs() < 1e-14 * want.abs().max(1.0));
        }
    }

    #[test]
    fn matches_printed_stationary_derivatives() {
        // beta_1 and beta_2 in their expanded rational form
        let (g, l) = (12.0, 3);
        for &x in &[1.5, 8.0, 40.0] {
            let (mut f1, mut f2) = (0.0, 0.0);
            for i in 0..l {
                let fi = i as f64;
                let c = binomial(2 * i as u64, i as u64) * (g / 4.0f64).powi(i as i32);
                f1 += c * (g - 2.0 * fi * x) / (2.0 * x.sqrt() * (x + g).powf(fi + 1.5));
                f2 += c * (4.0 * (fi + fi * fi) * x * x - 4.0 * (fi + 1.0) * g * x - g * g)
                    / (4.0 * x.powf(1.5) * (x + g).powf(fi + 2.5));
            }
            let v = theta(x, g, l);
            assert!((v.f1 - f1).abs() < 1e-13 * f1.abs());
            assert!((v.f2 - f2).abs() < 1e-13 * f2.abs());
        }
    }

    #[test]
    fn matched_kernel_reduces_without_interference() {
        // gi = 0: gm / Nd^3 = gn / Nd, so the matched kernel equals theta at gn
        for &x in &[2.0, 17.0, 250.0] {
            let a = psi_matched(x, 0.0, 3.0, 3);
            let b = theta(x, 3.0, 3);
            assert!((a.f - b.f).abs() < 1e-14 && (a.f1 - b.f1).abs() < 1e-14 && (a.f2 - b.f2).abs() < 1e-14);
        }
    }

    #[test]
    fn derivatives_against_differences() {
        let sys = SystemParams { n: 256, ncp: 16, nm: 4, np: 544, ..SystemParams::default() };
        for impact in [ImpactClass::Stationary, ImpactClass::NonStationary] {
            let ctx = AnalyticContext::new(sys, impact, LinkBudget::from_db(-5.0, 10.0, 1.0)).unwrap();
            for &x in &[3.0, 31.0, 200.0] {
                let v = f_value(x, &ctx);
                let d1 = central(|t| f_value(t, &ctx).f, x);
                let d2 = central(|t| f_value(t, &ctx).f1, x);
                assert!((v.f1 - d1).abs() <= 1e-6 * v.f1.abs(), "{impact:?} F1 at {x}");
                assert!((v.f2 - d2).abs() <= 1e-6 * v.f2.abs().max(v.f1.abs() / x), "{impact:?} F2 at {x}");
            }
        }
    }

    #[test]
    fn interference_free_limits_agree() {
        // Pi = 0: Psi_2 and Psi_1 coincide, so the mixture is theta at gamma_n
        let sys = SystemParams::default();
        let b = LinkBudget { ps: 1.0, pn: 0.3, pi: 0.0, bc: 1.0 };
        let s = AnalyticContext::new(sys, ImpactClass::Stationary, b).unwrap();
        let n = AnalyticContext::new(sys, ImpactClass::NonStationary, b).unwrap();
        for &x in &[1.0, 16.0, 500.0] {
            assert!((ber_before_decoding(x, &s).unwrap() - ber_before_decoding(x, &n).unwrap()).abs() < 1e-14);
        }
        assert!(ber_before_decoding(0.5, &s).is_err());
    }
}
