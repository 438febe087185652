use std::time::Instant;

use interference_lab::ImpactClass;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use throughput_optimizer::{
    ber_before_decoding, codeword_success, f_value, grid_search, optimize_nd, packet_throughput, theta,
    AnalyticContext, Feasibility, LinkBudget, SystemParams, MAX_NEWTON_STEPS,
};

fn log_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| 10f64.powf(4.0 * k as f64 / (points - 1) as f64)).collect()
}

fn central(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-4 * x;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[test]
fn derivatives_match_central_differences_on_log_grid() {
    // F approaches one like (gamma / Nd)^L, so the difference quotient is only
    // resolvable in f64 while gamma stays within a few decades of Nd
    let cases = [
        (ImpactClass::Stationary, -10.0, 15.0),
        (ImpactClass::Stationary, -10.0, 25.0),
        (ImpactClass::Stationary, -15.0, 20.0),
        (ImpactClass::NonStationary, -20.0, 10.0),
        (ImpactClass::NonStationary, -20.0, 25.0),
    ];
    for (impact, snr, isr) in cases {
        let ctx = AnalyticContext::new(SystemParams::default(), impact, LinkBudget::from_db(snr, isr, 1.0)).unwrap();
        for x in log_grid(41) {
            let v = f_value(x, &ctx);
            let d1 = central(|t| f_value(t, &ctx).f, x);
            let d2 = central(|t| f_value(t, &ctx).f1, x);
            let e1 = (v.f1 - d1).abs() / v.f1.abs();
            let e2 = (v.f2 - d2).abs() / v.f2.abs().max(v.f1.abs() / x);
            assert!(e1 <= 1e-6, "{impact:?} ({snr}, {isr}) F1 at {x}: {e1:e}");
            assert!(e2 <= 1e-6, "{impact:?} ({snr}, {isr}) F2 at {x}: {e2:e}");
        }
    }
}

#[test]
fn f1_positive_on_bracket() {
    let ctx = AnalyticContext::new(
        SystemParams::default(),
        ImpactClass::Stationary,
        LinkBudget::from_db(-10.0, 10.0, 1.0),
    )
    .unwrap();
    let g = ctx.gamma_in();
    let mut x = (g / 8.0).floor().max(1.0);
    while x <= (2.0 * g).ceil() {
        assert!(f_value(x, &ctx).f1 > 0.0);
        x += 1.0;
    }
}

#[test]
fn rayleigh_bpsk_cross_check() {
    // single path, gamma_in = Nd: post-despreading SNR of one, the
    // Rayleigh-faded coherent BPSK error rate
    let sys = SystemParams { l: 1, nm: 2, ..SystemParams::default() };
    let ctx = AnalyticContext::new(sys, ImpactClass::Stationary, LinkBudget { ps: 1.0, pn: 8.0, pi: 0.0, bc: 1.0 }).unwrap();
    let pe = ber_before_decoding(8.0, &ctx).unwrap();
    assert!((pe - 0.5 * (1.0 - 0.5f64.sqrt())).abs() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 400_000;
    let normal = rand_distr::Normal::new(0.0, 0.5f64.sqrt()).unwrap();
    let mut errors = 0usize;
    for _ in 0..n {
        use rand_distr::Distribution;
        let (hr, hi) = (normal.sample(&mut rng), normal.sample(&mut rng));
        let (wr, wi) = (normal.sample(&mut rng), normal.sample(&mut rng));
        // x = +1; statistic Re(conj(h) y)
        let stat = hr * (hr + wr) + hi * (hi + wi);
        errors += usize::from(stat < 0.0);
    }
    let emp = errors as f64 / n as f64;
    let sigma = (pe * (1.0 - pe) / n as f64).sqrt();
    assert!((emp - pe).abs() < 3.0 * sigma, "{emp} vs {pe}");
}

#[test]
fn optimizer_matches_grid_over_random_budgets() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let feas = Feasibility::Integers { max: 4096 };
    let start = Instant::now();
    for trial in 0..100 {
        let impact = if rng.gen_bool(0.5) { ImpactClass::Stationary } else { ImpactClass::NonStationary };
        let budget = LinkBudget::from_db(rng.gen_range(-15.0..5.0), rng.gen_range(0.0..30.0), 14.88e6);
        let ctx = AnalyticContext::new(SystemParams::default(), impact, budget).unwrap();
        let r = optimize_nd(&ctx, feas).unwrap();
        let (_, best) = grid_search(&ctx, feas);
        assert!(r.eta_opt >= 0.999 * best, "trial {trial}: {} vs {best}", r.eta_opt);
        assert!(r.iterations <= MAX_NEWTON_STEPS, "trial {trial}: {} iterations", r.iterations);
    }
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn divisor_constrained_optimum() {
    let sys = SystemParams::default();
    let feas = Feasibility::DivisorsOf { m: sys.n * 2 };
    for isr in [5.0, 15.0, 25.0] {
        let ctx = AnalyticContext::new(sys, ImpactClass::Stationary, LinkBudget::from_db(-10.0, isr, 14.88e6)).unwrap();
        let r = optimize_nd(&ctx, feas).unwrap();
        let (nd, best) = grid_search(&ctx, feas);
        assert_eq!(1984 % r.nd_opt, 0);
        assert!(r.eta_opt >= 0.999 * best, "ISR {isr}: {} at {} vs {best} at {nd}", r.eta_opt, r.nd_opt);
    }
}

#[test]
fn optimum_grows_with_interference() {
    let feas = Feasibility::Integers { max: 4096 };
    let nds: Vec<usize> = [0.0, 10.0, 20.0]
        .iter()
        .map(|&isr| {
            let ctx = AnalyticContext::new(
                SystemParams::default(),
                ImpactClass::Stationary,
                LinkBudget::from_db(-10.0, isr, 14.88e6),
            )
            .unwrap();
            optimize_nd(&ctx, feas).unwrap().nd_opt
        })
        .collect();
    assert!(nds.windows(2).all(|w| w[0] <= w[1]), "{nds:?}");
}

proptest! {
    #[test]
    fn ber_and_success_are_probabilities(nd in 1.0f64..5000.0, snr in -20.0f64..20.0, isr in -10.0f64..40.0, ns in any::<bool>()) {
        let impact = if ns { ImpactClass::NonStationary } else { ImpactClass::Stationary };
        let ctx = AnalyticContext::new(SystemParams::default(), impact, LinkBudget::from_db(snr, isr, 1.0)).unwrap();
        let pe = ber_before_decoding(nd, &ctx).unwrap();
        prop_assert!((0.0..=0.5).contains(&pe));
        let pdc = codeword_success(pe, &ctx.sys.ecc).unwrap();
        prop_assert!((0.0..=1.0).contains(&pdc));
        prop_assert!(packet_throughput(nd, &ctx).unwrap() >= 0.0);
    }

    #[test]
    fn stationary_ber_falls_with_nd(g in 0.1f64..1000.0, x in 1.0f64..1000.0) {
        prop_assert!(theta(x * 1.5, g, 3).f >= theta(x, g, 3).f);
    }
}
