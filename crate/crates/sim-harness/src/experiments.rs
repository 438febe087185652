use daft_core::DaftParams;
use interference_lab::{
    classify, daft_image, flat_sweep_cycles, matched_slope, moment_check, relative_error_db, Band, ImpactClass,
    InterferenceSpec,
};
use rayon::prelude::*;
use throughput_optimizer::{
    ber_before_decoding, grid_search, ln_codeword_success, optimize_nd, packet_throughput, throughput_at_ber,
    AnalyticContext, LinkBudget, MAX_NEWTON_STEPS,
};

use crate::config::{DetectorKind, ExperimentConfig, ExperimentKind, NdMode, SystemKind, Waveform};
use crate::link::{hard_bits, random_bits, run_packets, stream_rng, Equalizer, Link};
use crate::output::{proportion_ci95, Report, ResultRow, Rows};
use crate::HarnessError;

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn afdm_params(cfg: &ExperimentConfig) -> Result<DaftParams, HarnessError> {
    cfg.frame.params(Waveform::Afdm, cfg.channel.doppler_max_bins)
}

fn context(cfg: &ExperimentConfig, impact: ImpactClass, isr_db: f64) -> Result<AnalyticContext, HarnessError> {
    Ok(AnalyticContext::new(
        cfg.system(),
        impact,
        LinkBudget::from_db(cfg.snr_db, isr_db, cfg.frame.bandwidth_hz()),
    )?)
}

fn interference_at(cfg: &ExperimentConfig, isr_db: f64) -> InterferenceSpec {
    cfg.interference.with_power(db_to_lin(isr_db))
}

/// Runs the experiment named by `kind`.
pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    if let Some(k) = cfg.kind {
        if k != kind {
            return Err(HarnessError::Config(format!("kind: config is for {}, not {}", k.name(), kind.name())));
        }
    }
    match kind {
        ExperimentKind::ValidateInterference => run_validate_interference(cfg),
        ExperimentKind::BerSweep => run_ber_sweep(cfg),
        ExperimentKind::ThroughputVsIsr => run_throughput_vs_isr(cfg),
        ExperimentKind::OptimizeNd => run_optimize_nd(cfg),
        ExperimentKind::EndToEndPackets => run_end_to_end_packets(cfg),
    }
}

/// Closed-form error of the deterministic families and empirical moments
/// of the Gaussian ones, `trials` draws each.
pub fn run_validate_interference(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let p = afdm_params(cfg)?;
    let (t, seed, n) = (cfg.trials, cfg.seed, p.n as f64);
    let mut rows = Rows::new(ExperimentKind::ValidateInterference.name(), "n", seed);
    let mut report = Report::default();

    let tone = relative_error_db(&InterferenceSpec::single_tone(1.0, 0.0, 0.0), &p, t, seed)?;
    rows.push(n, "tone_rel_err_db", tone, None, t as u64);
    report.check("tone_rel_err_db <= -60", tone <= -60.0, format!("{tone:.2} dB"));

    if let Some(&ns) = flat_sweep_cycles(&p).first() {
        let unmatched = InterferenceSpec::Sweep { pi: 1.0, f_m_norm: 0.0, theta: 0.0, slope_norm: ns as f64 / n, ns };
        let e = relative_error_db(&unmatched, &p, t, seed.wrapping_add(1))?;
        rows.push(n, "sweep_unmatched_rel_err_db", e, None, t as u64);
        report.check("sweep_unmatched_rel_err_db <= -60", e <= -60.0, format!("{e:.2} dB"));
    }
    let matched = InterferenceSpec::Sweep { pi: 1.0, f_m_norm: 0.0, theta: 0.0, slope_norm: matched_slope(&p), ns: 1 };
    let e = relative_error_db(&matched, &p, t, seed.wrapping_add(2))?;
    rows.push(n, "sweep_matched_rel_err_db", e, None, t as u64);

    // whole-frame variance: the mean of |J(m)|^2 over bins and draws
    let bb = InterferenceSpec::Broadband { pi: 1.0 };
    let pooled: f64 = (0..t)
        .into_par_iter()
        .map(|k| daft_image(&bb, &p, seed.wrapping_add(3).wrapping_add(k as u64 * 0x1_0000)).map(|j| j.bins.iter().map(|v| v.norm_sqr()).sum::<f64>()))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .sum::<f64>()
        / (t as f64 * n);
    let pooled_err = (pooled - 1.0).abs();
    rows.push(n, "broadband_var_rel_err", pooled_err, Some(1.96 / (t as f64 * n).sqrt()), t as u64);
    report.check("broadband_var_rel_err <= 0.02", pooled_err <= 0.02, format!("{pooled_err:.4}"));

    let gaussian = [
        ("broadband", bb),
        (
            "narrowband1",
            InterferenceSpec::Narrowband1 {
                pi: 1.0,
                f_d: 0.1,
                theta: 0.0,
                bands: vec![Band { center: 0.0, width: 0.2 }],
                filter_len: 129,
            },
        ),
        ("narrowband2", InterferenceSpec::Narrowband2 { pi: 1.0, f_d: 0.1, theta: 0.0, ru: 4, psk_order: 4 }),
    ];
    for (i, (name, spec)) in gaussian.iter().enumerate() {
        let m = moment_check(spec, &p, t, seed.wrapping_add(10 + i as u64))?;
        rows.push(n, format!("{name}_mean_err_sigmas"), m.mean_err / m.mean_sigma, None, t as u64);
        rows.push(n, format!("{name}_bin_var_rel_err_max"), m.var_rel_err, None, t as u64);
    }
    report.rows = rows.out;
    Ok(report)
}

/// `Eb/N0` at which a BER curve first falls through `target`, by
/// interpolation in `log10(BER)`.
pub fn crossing_db(ebn0_db: &[f64], ber: &[f64], floor: f64, target: f64) -> Option<f64> {
    let lg = |b: f64| b.max(floor).log10();
    ebn0_db.windows(2).zip(ber.windows(2)).find_map(|(x, b)| {
        if b[0] >= target && b[1] < target {
            let (y0, y1) = (lg(b[0]), lg(b[1]));
            Some(x[0] + (target.log10() - y0) * (x[1] - x[0]) / (y1 - y0))
        } else {
            None
        }
    })
}

/// BER against `Eb/N0` for unspread AFDM and spread AFDM-A, each detector
/// run on the same received frames. `Eb/N0 = Ps Nd / (log2(Nm) Pn)`.
pub fn run_ber_sweep(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let NdMode::Fixed(nd_a) = cfg.nd else {
        return Err(HarnessError::Config("nd: ber-sweep needs a fixed spreading length".into()));
    };
    if cfg.isr_db.len() > 1 {
        return Err(HarnessError::Config("isr_db: ber-sweep takes at most one interference level".into()));
    }
    if cfg.detectors.is_empty() {
        return Err(HarnessError::Config("detectors: at least one detector is required".into()));
    }
    let p = afdm_params(cfg)?;
    let kind = ExperimentKind::BerSweep.name();
    let mut rows = Rows::new(kind, "ebn0_db", cfg.seed);
    let systems = [("afdm", 1usize), ("afdm_a", nd_a)];
    let interference = cfg.isr_db.first().map(|&isr| interference_at(cfg, isr));
    let dets = &cfg.detectors;
    // ber[system][detector][point]
    let mut ber = vec![vec![Vec::new(); dets.len()]; systems.len()];
    let mut bits_run = vec![0u64; systems.len()];

    for (pt, &ebn0) in cfg.ebn0_db.iter().enumerate() {
        for (si, &(name, nd)) in systems.iter().enumerate() {
            let pn = nd as f64 / (cfg.log2_nm() as f64 * db_to_lin(ebn0));
            let link = Link::new(p, nd, cfg.nm, cfg.channel.clone(), interference.clone(), pn)?;
            let bpf = link.bits_per_frame();
            let frames = cfg.trials.div_ceil(bpf);
            let fpc = cfg.frames_per_channel;
            let blocks: Vec<Vec<u64>> = (0..frames.div_ceil(fpc))
                .into_par_iter()
                .map(|b| {
                    let mut rng = stream_rng(cfg.seed, (pt * systems.len() + si) as u64, b as u64);
                    let eff = link.draw_channel(&mut rng)?;
                    let mmse = match dets.contains(&DetectorKind::Mmse) {
                        true => Some(link.mmse_filter(&eff)?),
                        false => None,
                    };
                    let mut errors = vec![0u64; dets.len()];
                    for _ in 0..fpc.min(frames - b * fpc) {
                        let bits = random_bits(bpf, &mut rng);
                        let y = link.transmit(&bits, &eff, &mut rng)?;
                        for (e, d) in errors.iter_mut().zip(dets) {
                            let eq = match d {
                                DetectorKind::Cdd => Equalizer::Cdd,
                                DetectorKind::Mmse => Equalizer::Mmse(mmse.as_ref().expect("built above")),
                            };
                            *e += hard_bits(&link.detect(&y, &eff, &eq)?).zip(&bits).filter(|(a, b)| a != *b).count() as u64;
                        }
                    }
                    Ok(errors)
                })
                .collect::<Result<_, HarnessError>>()?;
            let bits = (frames * bpf) as u64;
            bits_run[si] = bits;
            for (di, d) in dets.iter().enumerate() {
                let e: u64 = blocks.iter().map(|v| v[di]).sum();
                let b = e as f64 / bits as f64;
                ber[si][di].push(b);
                rows.push(ebn0, format!("ber_{name}_{}", det_name(*d)), b, Some(proportion_ci95(e, bits)), bits);
            }
        }
    }

    let mut report = Report::default();
    let target = 1e-3;
    let mut cross = vec![vec![None; dets.len()]; systems.len()];
    for (si, &(name, _)) in systems.iter().enumerate() {
        for (di, d) in dets.iter().enumerate() {
            let floor = 0.5 / bits_run[si].max(1) as f64;
            cross[si][di] = crossing_db(&cfg.ebn0_db, &ber[si][di], floor, target);
            if let Some(x) = cross[si][di] {
                rows.out.push(ResultRow {
                    experiment: kind.into(),
                    sweep_var: "target_ber".into(),
                    sweep_val: target,
                    metric: format!("ebn0_db_{name}_{}", det_name(*d)),
                    value: x,
                    ci95: None,
                    trials: bits_run[si],
                    seed: cfg.seed,
                });
            }
        }
    }
    let pos = |k| dets.iter().position(|&d| d == k);
    if let (Some(c), Some(m)) = (pos(DetectorKind::Cdd), pos(DetectorKind::Mmse)) {
        match (cross[1][c], cross[1][m]) {
            (Some(xc), Some(xm)) => {
                report.check("cdd_within_1db_of_mmse", (xc - xm).abs() <= 1.0, format!("CDD {xc:.2} dB, MMSE {xm:.2} dB"))
            }
            _ => report.check("cdd_within_1db_of_mmse", false, "a curve never crosses 1e-3 on this grid"),
        }
    }
    report.rows = rows.out;
    Ok(report)
}

fn det_name(d: DetectorKind) -> &'static str {
    match d {
        DetectorKind::Cdd => "cdd",
        DetectorKind::Mmse => "mmse",
    }
}

/// Analytic, Monte Carlo and semi-analytic (measured BER through the code
/// model) throughput against ISR for AFDM-F, OFDM-F and AFDM-A.
pub fn run_throughput_vs_isr(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let afdm = afdm_params(cfg)?;
    let ofdm = cfg.frame.params(Waveform::Ofdm, cfg.channel.doppler_max_bins)?;
    let (nd_f, feas) = (cfg.fixed_nd(), cfg.feasible_nd());
    let mut rows = Rows::new(ExperimentKind::ThroughputVsIsr.name(), "isr_db", cfg.seed);
    let mut report = Report::default();
    let mut eta_a = Vec::new();
    let mut stationary = true;

    for (pt, &isr) in cfg.isr_db.iter().enumerate() {
        let spec = interference_at(cfg, isr);
        let impact = classify(&spec, &afdm);
        stationary &= impact == ImpactClass::Stationary;
        let ctx = context(cfg, impact, isr)?;
        let f = packet_throughput(nd_f as f64, &ctx)?;
        let a = optimize_nd(&ctx, feas)?;
        rows.analytic(isr, "analytic_eta_afdm_f", f);
        rows.analytic(isr, "analytic_eta_afdm_a", a.eta_opt);
        rows.analytic(isr, "nd_afdm_a", a.nd_opt as f64);
        eta_a.push((isr, a.eta_opt, f));

        for sys in &cfg.mc_systems {
            let (params, nd) = match sys {
                SystemKind::AfdmF => (afdm, nd_f),
                SystemKind::OfdmF => (ofdm, nd_f),
                SystemKind::AfdmA => (afdm, a.nd_opt),
            };
            let link = Link::new(params, nd, cfg.nm, cfg.channel.clone(), Some(spec.clone()), ctx.budget.pn)?;
            // all systems share the streams of this point, so draws are paired
            let s = run_packets(&link, &cfg.ecc, cfg.np, cfg.trials, cfg.seed, pt as u64)?;
            let scale = 1.0 / (ctx.k() * nd as f64);
            let (rate, ber) = (s.success_rate(), s.ber());
            let name = sys.name();
            rows.push(isr, format!("mc_eta_{name}"), rate * scale, Some(s.success_ci95() * scale), s.packets);
            rows.push(isr, format!("mc_ber_{name}"), ber, Some(s.ber_ci95()), s.bits);
            rows.push(isr, format!("semi_eta_{name}"), throughput_at_ber(ber, nd as f64, &ctx), None, s.bits);
        }
    }

    if let Some(&(isr, a, f)) = eta_a.last() {
        if stationary {
            report.check("adaptive_at_least_5x_fixed", a >= 5.0 * f, format!("ISR {isr} dB: {a:.4e} vs {f:.4e}"));
        }
        let get = |m: &str| rows.out.iter().rev().find(|r| r.metric == m && r.sweep_val == isr).map(|r| r.value);
        if let (Some(o), Some(af)) = (get("semi_eta_ofdm_f"), get("semi_eta_afdm_f")) {
            report.check("ofdm_below_afdm", o < af, format!("ISR {isr} dB: OFDM {o:.4e} vs AFDM {af:.4e}"));
        }
    }
    if !stationary {
        let band: Vec<f64> = eta_a.iter().filter(|(i, ..)| (8.0..=30.0).contains(i)).map(|e| e.1).collect();
        if band.len() >= 2 {
            let (lo, hi) = band.iter().fold((f64::INFINITY, 0f64), |(l, h), &v| (l.min(v), h.max(v)));
            let spread = (hi - lo) / hi;
            report.check("matched_adaptive_flat_1pct", spread <= 0.01, format!("relative spread {spread:.4}"));
        }
    }
    report.rows = rows.out;
    Ok(report)
}

/// Optimizer output, trace and grid oracle per ISR point.
pub fn run_optimize_nd(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let p = afdm_params(cfg)?;
    let feas = cfg.feasible_nd();
    let mut rows = Rows::new(ExperimentKind::OptimizeNd.name(), "isr_db", cfg.seed);
    let mut report = Report::default();
    let mut nds = Vec::new();
    let mut stationary = true;
    for &isr in &cfg.isr_db {
        let impact = classify(&interference_at(cfg, isr), &p);
        stationary &= impact == ImpactClass::Stationary;
        let ctx = context(cfg, impact, isr)?;
        let r = optimize_nd(&ctx, feas)?;
        let (gnd, geta) = grid_search(&ctx, feas);
        rows.analytic(isr, "nd_opt", r.nd_opt as f64);
        rows.analytic(isr, "eta_opt", r.eta_opt);
        rows.analytic(isr, "iterations", r.iterations as f64);
        rows.analytic(isr, "grid_nd", gnd as f64);
        rows.analytic(isr, "grid_eta", geta);
        rows.analytic(isr, "grid_fallback", f64::from(u8::from(r.grid_fallback)));
        for (i, t) in r.trace.iter().enumerate() {
            rows.analytic(isr, format!("trace_{i:02}_nd"), t.nd);
            rows.analytic(isr, format!("trace_{i:02}_u"), t.u);
            rows.analytic(isr, format!("trace_{i:02}_step"), t.d);
        }
        report.check(format!("grid_oracle_isr_{isr}"), r.eta_opt >= 0.999 * geta, format!("{:.6e} vs {geta:.6e}", r.eta_opt));
        report.check(format!("iterations_isr_{isr}"), r.iterations <= MAX_NEWTON_STEPS, format!("{}", r.iterations));
        nds.push(r.nd_opt);
    }
    if stationary {
        let mono = nds.windows(2).all(|w| w[0] <= w[1]);
        report.check("nd_opt_nondecreasing", mono, format!("{nds:?}"));
    }
    report.rows = rows.out;
    Ok(report)
}

/// Monte Carlo packet success against the analytic prediction. The
/// prediction passes at a point when it lies inside the 95% interval of the
/// simulated success rate (blocks as independent samples).
pub fn run_end_to_end_packets(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let p = afdm_params(cfg)?;
    let mut rows = Rows::new(ExperimentKind::EndToEndPackets.name(), "isr_db", cfg.seed);
    let mut report = Report::default();
    for (pt, &isr) in cfg.isr_db.iter().enumerate() {
        let spec = interference_at(cfg, isr);
        let ctx = context(cfg, classify(&spec, &p), isr)?;
        let nd = match cfg.nd {
            NdMode::Fixed(n) => n,
            NdMode::Adaptive => optimize_nd(&ctx, cfg.feasible_nd())?.nd_opt,
        };
        let link = Link::new(p, nd, cfg.nm, cfg.channel.clone(), Some(spec), ctx.budget.pn)?;
        let s = run_packets(&link, &cfg.ecc, cfg.np, cfg.trials, cfg.seed, pt as u64)?;
        let pe = ber_before_decoding(nd as f64, &ctx)?;
        let pred = (cfg.system().g() as f64 * ln_codeword_success(pe, &cfg.ecc)).exp();
        let scale = 1.0 / (ctx.k() * nd as f64);
        let (rate, hw) = (s.success_rate(), s.success_ci95());
        let within = (rate - pred).abs() <= hw;
        rows.analytic(isr, "nd", nd as f64);
        rows.push(isr, "mc_success_rate", rate, Some(hw), s.packets);
        rows.push(isr, "mc_eta", rate * scale, Some(hw * scale), s.packets);
        rows.push(isr, "mc_ber", s.ber(), Some(s.ber_ci95()), s.bits);
        rows.analytic(isr, "analytic_ber", pe);
        rows.analytic(isr, "analytic_success", pred);
        rows.analytic(isr, "analytic_eta", pred * scale);
        rows.analytic(isr, "within_ci", f64::from(u8::from(within)));
        report.check(
            format!("within_ci_isr_{isr}"),
            within,
            format!("simulated {rate:.4} +- {hw:.4} ({} packets) vs predicted {pred:.4}", s.packets),
        );
    }
    report.rows = rows.out;
    Ok(report)
}
