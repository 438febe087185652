use channel_model::{build_daft_matrix, ChannelRealization, PathSpec};
use daft_core::{DaftParams, DaftSignal, C64};
use detectors::{
    cdd_despread, cdd_equalize, dense_adjoint_apply, hard_decision, mmse_detect, CddConfig, MmseFilter,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spread_code_chain::{gen_mseq, map_constellation, primitive_taps, spread, SpreadingSequence};

fn random_symbols(rng: &mut ChaCha8Rng, n: usize, nm: usize) -> Vec<C64> {
    let bits: Vec<u8> = (0..n * if nm == 4 { 2 } else { 1 }).map(|_| rng.gen_range(0..2)).collect();
    map_constellation(&bits, nm).unwrap()
}

fn matvec(h: &[C64], x: &[C64], n: usize) -> Vec<C64> {
    (0..n).map(|r| (0..n).map(|c| h[r * n + c] * x[c]).sum()).collect()
}

fn adjoint_matvec(h: &[C64], x: &[C64], n: usize) -> Vec<C64> {
    (0..n).map(|c| (0..n).map(|r| h[r * n + c].conj() * x[r]).sum()).collect()
}

#[test]
fn matches_dense_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &n in &[16usize, 32, 64] {
        let p = DaftParams::with_default_chirps(n, n / 8, 2.0 / n as f64).unwrap();
        for fractional in [false, true] {
            let paths: Vec<PathSpec> = (0..3)
                .map(|i| {
                    let k = if fractional { rng.gen_range(-2.0..2.0) } else { rng.gen_range(-2..=2) as f64 };
                    PathSpec::integer(C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), i, k, n)
                })
                .collect();
            let ch = ChannelRealization::new(paths).unwrap();
            let kv = 4;
            let eff = build_daft_matrix(&ch, &p, kv).unwrap();
            let y: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let fast = cdd_equalize(&DaftSignal::new(y.clone()), &eff, &p, &CddConfig { kv }).unwrap();
            let slow = dense_adjoint_apply(&eff, &y);
            let err = fast.x_hat.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err <= 1e-10, "N = {n}, fractional = {fractional}: {err}");
        }
    }
}

#[test]
fn two_path_three_term_expansion() {
    // x_hat = (|h1|^2 + |h2|^2) x + conj(h1) h2 H1^H H2 x + conj(h2) h1 H2^H H1 x
    let n = 32;
    let p = DaftParams::with_default_chirps(n, 4, 2.0 / n as f64).unwrap();
    let (h1, h2) = (C64::new(0.7, -0.2), C64::new(-0.3, 0.5));
    let unit = |d, k| ChannelRealization::integer(&[C64::new(1.0, 0.0)], &[d], &[k], n).unwrap();
    let m1 = build_daft_matrix(&unit(0, 1.0), &p, 0).unwrap().dense();
    let m2 = build_daft_matrix(&unit(3, -2.0), &p, 0).unwrap().dense();
    let both = ChannelRealization::integer(&[h1, h2], &[0, 3], &[1.0, -2.0], n).unwrap();
    let eff = build_daft_matrix(&both, &p, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = random_symbols(&mut rng, n, 4);
    let y = eff.apply(&x).unwrap();
    let got = cdd_equalize(&DaftSignal::new(y), &eff, &p, &CddConfig { kv: 0 }).unwrap().x_hat;
    let t12 = adjoint_matvec(&m1, &matvec(&m2, &x, n), n);
    let t21 = adjoint_matvec(&m2, &matvec(&m1, &x, n), n);
    let g = h1.norm_sqr() + h2.norm_sqr();
    for i in 0..n {
        let want = x[i] * g + h1.conj() * h2 * t12[i] + h2.conj() * h1 * t21[i];
        assert!((got[i] - want).norm() < 1e-10);
    }
}

#[test]
fn single_path_decisions_are_exact() {
    let n = 64;
    let p = DaftParams::with_default_chirps(n, 8, 3.0 / n as f64).unwrap();
    let ch = ChannelRealization::integer(&[C64::new(-0.4, 0.9)], &[5], &[-3.0], n).unwrap();
    let eff = build_daft_matrix(&ch, &p, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for nm in [2, 4] {
        let x = random_symbols(&mut rng, n, nm);
        let y = DaftSignal::new(eff.apply(&x).unwrap());
        let xh = cdd_equalize(&y, &eff, &p, &CddConfig { kv: 0 }).unwrap().x_hat;
        assert_eq!(hard_decision(&xh, nm).unwrap(), hard_decision(&x, nm).unwrap());
        // positive real scaling by |h|^2
        for (a, b) in xh.iter().zip(&x) {
            assert!((a - b * ch.paths[0].gain.norm_sqr()).norm() < 1e-12);
        }
    }
}

/// Two Doppler-only paths with `c2 = 0`: each `H_i` is a pure cyclic shift,
/// so the cross terms are shifts of the frame by `+-delta`. A frame of one
/// repeated spread symbol makes the despread cross term the periodic
/// autocorrelation `R_d(delta)`.
fn despread_cross_ratio(nd: usize, delta: usize, h: [C64; 2]) -> f64 {
    let degree = (nd + 1).trailing_zeros();
    let seq = gen_mseq(degree, primitive_taps(degree).unwrap(), 1).unwrap();
    assert_eq!(seq.nd(), nd);
    let n = nd * 8;
    let p = DaftParams::new(n, 1.0 / (2.0 * n as f64), 0.0, 0).unwrap();
    let ch = ChannelRealization::integer(&h, &[0, 0], &[0.0, delta as f64], n).unwrap();
    let eff = build_daft_matrix(&ch, &p, 0).unwrap();
    let c = C64::new(1.0, 1.0) * std::f64::consts::FRAC_1_SQRT_2;
    let x = spread(&vec![c; n / nd], &seq);
    let y = DaftSignal::new(eff.apply(&x.bins).unwrap());
    let out = cdd_despread(&cdd_equalize(&y, &eff, &p, &CddConfig { kv: 0 }).unwrap(), &seq).unwrap();
    let desired = c * (h[0].norm_sqr() + h[1].norm_sqr()) * nd as f64;
    let cross: f64 = out.iter().map(|v| (v - desired).norm_sqr()).sum();
    cross / (desired.norm_sqr() * out.len() as f64)
}

#[test]
fn despreading_suppresses_cross_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for nd in [7usize, 15, 31] {
        for _ in 0..20 {
            let delta = rng.gen_range(1..nd);
            let h = [
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let r = despread_cross_ratio(nd, delta, h);
            assert!(r <= 1.0 / (nd * nd) as f64 + 1e-12, "Nd = {nd}, shift {delta}: {r}");
        }
    }
}

#[test]
fn mmse_matched_filter_limit() {
    let n = 32;
    let p = DaftParams::with_default_chirps(n, 4, 2.0 / n as f64).unwrap();
    let ch = ChannelRealization::integer(&[C64::new(0.9, 0.3)], &[2], &[1.0], n).unwrap();
    let eff = build_daft_matrix(&ch, &p, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = random_symbols(&mut rng, n, 4);
    let y = DaftSignal::new(eff.apply(&x).unwrap());
    let pn = 1e6;
    let m = MmseFilter::new(&eff, pn).unwrap().equalize(&y).unwrap().x_hat;
    let c = cdd_equalize(&y, &eff, &p, &CddConfig { kv: 0 }).unwrap().x_hat;
    for (a, b) in m.iter().zip(&c) {
        assert!((a * pn - b).norm() < 1e-4 * b.norm().max(1.0));
    }
    let ones = SpreadingSequence::ones(1);
    let d = mmse_detect(&y, &eff, pn, &ones).unwrap();
    assert_eq!(hard_decision(&d, 4).unwrap(), hard_decision(&c, 4).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn equalizer_is_linear(seed in any::<u64>(), a in -3.0f64..3.0) {
        let n = 32;
        let p = DaftParams::with_default_chirps(n, 4, 2.0 / n as f64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = ChannelRealization::integer(
            &[C64::new(rng.gen_range(-1.0..1.0), 0.3), C64::new(0.2, rng.gen_range(-1.0..1.0))],
            &[0, 2],
            &[1.0, -1.0],
            n,
        )
        .unwrap();
        let eff = build_daft_matrix(&ch, &p, 1).unwrap();
        let u: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let w: Vec<C64> = u.iter().zip(&v).map(|(x, y)| x * a + y).collect();
        let cfg = CddConfig { kv: 1 };
        let f = |s: &[C64]| cdd_equalize(&DaftSignal::new(s.to_vec()), &eff, &p, &cfg).unwrap().x_hat;
        let (fu, fv, fw) = (f(&u), f(&v), f(&w));
        for i in 0..n {
            prop_assert!((fw[i] - (fu[i] * a + fv[i])).norm() < 1e-12);
        }
    }
}
