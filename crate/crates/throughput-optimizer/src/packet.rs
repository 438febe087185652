use spread_code_chain::EccParams;
use statrs::function::factorial::ln_binomial;

use crate::ber::{f_value, FValue};
use crate::{AnalyticContext, OptimizerError};

fn log_sum_exp(v: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln P_dc`, the log of the probability that at most `Ne` of `No` bits
/// are wrong at bit error rate `pe`.
pub fn ln_codeword_success(pe: f64, ecc: &EccParams) -> f64 {
    let (no, ne) = (ecc.no as u64, ecc.ne as u64);
    if pe <= 0.0 {
        return 0.0;
    }
    if pe >= 1.0 {
        return f64::NEG_INFINITY;
    }
    let (lp, lq) = (pe.ln(), (-pe).ln_1p());
    log_sum_exp((0..=ne).map(|k| ln_binomial(no, k) + k as f64 * lp + (no - k) as f64 * lq))
}

/// `P_dc = sum_{k <= Ne} C(No, k) pe^k (1 - pe)^(No - k)`.
pub fn codeword_success(pe: f64, ecc: &EccParams) -> Result<f64, OptimizerError> {
    if !(0.0..=1.0).contains(&pe) {
        return Err(OptimizerError::Domain(format!("bit error rate {pe} outside [0, 1]")));
    }
    Ok(ln_codeword_success(pe, ecc).exp().min(1.0))
}

/// Packet throughput `P_dc^G / (K Nd)` in packets per second.
pub fn packet_throughput(nd: f64, ctx: &AnalyticContext) -> Result<f64, OptimizerError> {
    let pe = crate::ber_before_decoding(nd, ctx)?;
    Ok(throughput_at_ber(pe, nd, ctx))
}

/// Throughput for a given pre-decoding BER, e.g. a measured one.
pub fn throughput_at_ber(pe: f64, nd: f64, ctx: &AnalyticContext) -> f64 {
    let g = ctx.sys.g() as f64;
    (g * ln_codeword_success(pe, &ctx.sys.ecc) - (ctx.k() * nd).ln()).exp()
}

/// Newton quantities at `Nd`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Objective {
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    /// Sign-carrying stationarity function: positive while throughput
    /// still grows with `Nd`.
    pub u: f64,
    /// `dU / dNd`.
    pub du: f64,
}

/// `U(Nd)` and `U'(Nd)`.
///
/// `d eta / d Nd` has the sign of
/// `U = G Nd F1 No C(No-1, Ne) - sum_k C(No, k) (1-F)^(k-Ne) (1+F)^(1-k+Ne)`,
/// obtained by dividing the derivative by the positive factor
/// `P_dc^(G-1) (1-F)^Ne (1+F)^(No-1-Ne) / (2^(G No) K Nd^2)`. Then
/// `U' = G No C (F1 + Nd F2) + sum_k C(No,k) (1-F)^(k-Ne-1) (1+F)^(Ne-k) (F - (1 - 2k + 2Ne)) F1`.
pub fn objective_derivatives(nd: f64, ctx: &AnalyticContext) -> Objective {
    let FValue { f, f1, f2 } = f_value(nd, ctx);
    let ecc = ctx.sys.ecc;
    let (no, ne) = (ecc.no as u64, ecc.ne as u64);
    let g = ctx.sys.g() as f64;
    let lead = g * no as f64 * ln_binomial(no - 1, ne).exp();
    let (lm, lp) = ((1.0 - f).ln(), (1.0 + f).ln());
    let mut s = 0.0;
    let mut ds = 0.0;
    for k in 0..=ne {
        let c = ln_binomial(no, k);
        let (kf, nef) = (k as f64, ne as f64);
        s += (c + (kf - nef) * lm + (1.0 - kf + nef) * lp).exp();
        ds += (c + (kf - nef - 1.0) * lm + (nef - kf) * lp).exp() * (f - (1.0 - 2.0 * kf + 2.0 * nef));
    }
    Objective { f, f1, f2, u: lead * nd * f1 - s, du: lead * (f1 + nd * f2) + ds * f1 }
}
