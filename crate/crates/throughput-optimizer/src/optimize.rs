use serde::{Deserialize, Serialize};

use crate::{objective_derivatives, packet_throughput, AnalyticContext, OptimizerError};

/// Which spreading lengths a frame can carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Feasibility {
    /// Any integer in `1..=max`.
    Integers { max: usize },
    /// Divisors of `m` (e.g. `N log2 Nm`) so spread symbols fill whole frames.
    DivisorsOf { m: usize },
}

impl Feasibility {
    pub fn values(&self) -> Vec<usize> {
        match *self {
            Feasibility::Integers { max } => (1..=max.max(1)).collect(),
            Feasibility::DivisorsOf { m } => (1..=m.max(1)).filter(|d| m % d == 0).collect(),
        }
    }

    pub fn max(&self) -> usize {
        match *self {
            Feasibility::Integers { max } => max.max(1),
            Feasibility::DivisorsOf { m } => m.max(1),
        }
    }

    /// Feasible values in the closed range spanned by `a` and `b`, plus the
    /// nearest feasible neighbour on each side.
    fn around(&self, a: f64, b: f64) -> Vec<usize> {
        let (lo, hi) = (a.min(b), a.max(b));
        let all = self.values();
        let below = all.iter().copied().filter(|&v| (v as f64) < lo).last();
        let above = all.iter().copied().find(|&v| (v as f64) > hi);
        below
            .into_iter()
            .chain(all.iter().copied().filter(|&v| (v as f64) >= lo && (v as f64) <= hi))
            .chain(above)
            .collect()
    }
}

/// One Newton iterate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub nd: f64,
    pub u: f64,
    pub d: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    pub nd_opt: usize,
    pub eta_opt: f64,
    /// Newton iterations carried out.
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
    /// Set when the result came from the exhaustive fallback.
    pub grid_fallback: bool,
    pub notes: Vec<String>,
}

/// Iteration cap for the Newton phase.
pub const MAX_NEWTON_STEPS: usize = 20;
const BISECTION_STEPS: usize = 8;

fn eta(nd: usize, ctx: &AnalyticContext) -> f64 {
    packet_throughput(nd as f64, ctx).unwrap_or(0.0)
}

fn best_of(cands: impl IntoIterator<Item = usize>, ctx: &AnalyticContext) -> Option<(usize, f64)> {
    cands.into_iter().map(|v| (v, eta(v, ctx))).fold(None, |acc, (v, e)| match acc {
        Some((_, be)) if be >= e => acc,
        _ => Some((v, e)),
    })
}

/// Exhaustive search over the feasible set.
pub fn grid_search(ctx: &AnalyticContext, feas: Feasibility) -> (usize, f64) {
    best_of(feas.values(), ctx).expect("feasible set is never empty")
}

/// Bisection-seeded Newton search for the throughput-maximising `Nd`.
///
/// The initial bracket is `[floor(g/8), ceil(2g)]` with `g = gamma_in`
/// (stationary) or `gamma_n` (matched sweep). Eight bisection steps on the
/// sign of `U` give the seed; Newton then moves by `D = -ceil(U / U')` until
/// two successive steps point in opposite directions. The last two iterates
/// bracket the stationary point, and the best feasible value in that
/// bracket (with one neighbour either side) is returned.
pub fn optimize_nd(ctx: &AnalyticContext, feas: Feasibility) -> Result<ThroughputReport, OptimizerError> {
    let mut notes = Vec::new();
    let max = feas.max() as f64;
    let g = ctx.bracket_gamma();
    let done = |nd: f64, prev: f64, iterations, trace, notes| {
        let (nd_opt, eta_opt) = best_of(feas.around(nd, prev), ctx).expect("bracket holds a feasible value");
        Ok(ThroughputReport { nd_opt, eta_opt, iterations, trace, grid_fallback: false, notes })
    };
    let fallback = |why: String, iterations, trace, mut notes: Vec<String>| {
        notes.push(why);
        let (nd_opt, eta_opt) = grid_search(ctx, feas);
        Ok(ThroughputReport { nd_opt, eta_opt, iterations, trace, grid_fallback: true, notes })
    };

    if ctx.budget.pi == 0.0 && ctx.budget.pn == 0.0 {
        notes.push("noise and interference free: smallest feasible Nd".into());
        return done(1.0, 1.0, 0, Vec::new(), notes);
    }
    if ctx.sys.chips_per_frame() < 2.0 * g {
        notes.push("bracket exceeds the frame: mixture weight clamped".into());
    }

    // bisection seed
    let mut lo = (g / 8.0).floor().max(1.0).min(max);
    let mut hi = (2.0 * g).ceil().max(1.0).min(max);
    let (ulo, uhi) = (objective_derivatives(lo, ctx).u, objective_derivatives(hi, ctx).u);
    if !ulo.is_finite() || !uhi.is_finite() {
        return fallback(format!("non-finite U on the bracket [{lo}, {hi}]"), 0, Vec::new(), notes);
    }
    let seed = if ulo <= 0.0 {
        lo
    } else if uhi >= 0.0 {
        hi
    } else {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if objective_derivatives(mid, ctx).u > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).round().max(1.0)
    };

    // Newton with integer steps
    let mut trace = Vec::new();
    let mut nd = seed;
    let mut prev_d: Option<f64> = None;
    let mut prev_nd = seed;
    for it in 0..=MAX_NEWTON_STEPS {
        let o = objective_derivatives(nd, ctx);
        let d = -(o.u / o.du).ceil();
        if !d.is_finite() {
            trace.push(TraceEntry { nd, u: o.u, d });
            return fallback(format!("non-finite Newton step at Nd = {nd}"), it, trace, notes);
        }
        trace.push(TraceEntry { nd, u: o.u, d });
        if let Some(pd) = prev_d {
            if d * pd <= 0.0 {
                return done(nd, prev_nd, it, trace, notes);
            }
        }
        let next = (nd + d).clamp(1.0, max);
        if next == nd {
            // pinned at a boundary of the feasible range
            return done(nd, prev_nd, it, trace, notes);
        }
        prev_d = Some(d);
        prev_nd = nd;
        nd = next;
    }
    fallback(format!("no direction change within {MAX_NEWTON_STEPS} Newton steps"), MAX_NEWTON_STEPS, trace, notes)
}

/// Counts sign changes of `U` on a log-spaced sample of `[lo, hi]`; a
/// unimodal throughput curve has at most one.
pub fn u_sign_changes(ctx: &AnalyticContext, lo: f64, hi: f64, samples: usize) -> usize {
    let (a, b) = (lo.max(1.0).ln(), hi.max(lo.max(1.0)).ln());
    let signs: Vec<bool> = (0..samples)
        .map(|k| (a + (b - a) * k as f64 / (samples - 1).max(1) as f64).exp())
        .map(|x| objective_derivatives(x, ctx).u > 0.0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{LinkBudget, SystemParams};
    use interference_lab::ImpactClass;

    fn ctx(snr: f64, isr: f64, impact: ImpactClass) -> AnalyticContext {
        AnalyticContext::new(SystemParams::default(), impact, LinkBudget::from_db(snr, isr, 14.88e6)).unwrap()
    }

    #[test]
    fn divisor_set() {
        assert_eq!(Feasibility::DivisorsOf { m: 12 }.values(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(Feasibility::DivisorsOf { m: 12 }.around(4.5, 5.5), vec![4, 6]);
        assert_eq!(Feasibility::Integers { max: 9 }.around(3.0, 5.0), vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn clean_channel_uses_smallest_nd() {
        let c = AnalyticContext::new(
            SystemParams::default(),
            ImpactClass::Stationary,
            LinkBudget { ps: 1.0, pn: 0.0, pi: 0.0, bc: 1.0 },
        )
        .unwrap();
        let r = optimize_nd(&c, Feasibility::Integers { max: 4096 }).unwrap();
        assert_eq!(r.nd_opt, 1);
        let hi_snr = optimize_nd(&ctx(30.0, -100.0, ImpactClass::Stationary), Feasibility::Integers { max: 4096 }).unwrap();
        assert_eq!(hi_snr.nd_opt, 1);
    }

    #[test]
    fn matches_grid_at_strong_broadband() {
        let c = ctx(-10.0, 20.0, ImpactClass::Stationary);
        let feas = Feasibility::Integers { max: 4096 };
        let r = optimize_nd(&c, feas).unwrap();
        let (_, best) = grid_search(&c, feas);
        assert!(r.eta_opt >= 0.999 * best, "{} vs {}", r.eta_opt, best);
        assert!(r.iterations <= MAX_NEWTON_STEPS && !r.grid_fallback);
        assert_eq!(u_sign_changes(&c, 1.0, 4096.0, 200), 1);
    }

    #[test]
    fn matched_sweep_prefers_small_nd() {
        let feas = Feasibility::Integers { max: 4096 };
        let s = optimize_nd(&ctx(-10.0, 20.0, ImpactClass::Stationary), feas).unwrap();
        let n = optimize_nd(&ctx(-10.0, 20.0, ImpactClass::NonStationary), feas).unwrap();
        assert!(n.nd_opt < s.nd_opt);
    }
}
