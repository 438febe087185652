use std::io::Write;

use serde::Serialize;

use crate::HarnessError;

/// One CSV line. Monte Carlo metrics carry a 95% half-width; analytic and
/// derived metrics leave it empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub sweep_var: String,
    pub sweep_val: f64,
    pub metric: String,
    pub value: f64,
    pub ci95: Option<f64>,
    pub trials: u64,
    pub seed: u64,
}

/// A pass/fail threshold evaluated by an experiment (`--check`).
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ResultRow>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// First row with this metric at this sweep value.
    pub fn value(&self, metric: &str, sweep_val: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.metric == metric && r.sweep_val == sweep_val).map(|r| r.value)
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }
}

/// Row builder bound to one experiment run.
pub(crate) struct Rows<'a> {
    pub experiment: &'a str,
    pub sweep_var: &'a str,
    pub seed: u64,
    pub out: Vec<ResultRow>,
}

impl<'a> Rows<'a> {
    pub fn new(experiment: &'a str, sweep_var: &'a str, seed: u64) -> Self {
        Self { experiment, sweep_var, seed, out: Vec::new() }
    }

    pub fn push(&mut self, sweep_val: f64, metric: impl Into<String>, value: f64, ci95: Option<f64>, trials: u64) {
        self.out.push(ResultRow {
            experiment: self.experiment.into(),
            sweep_var: self.sweep_var.into(),
            sweep_val,
            metric: metric.into(),
            value,
            ci95,
            trials,
            seed: self.seed,
        });
    }

    pub fn analytic(&mut self, sweep_val: f64, metric: impl Into<String>, value: f64) {
        self.push(sweep_val, metric, value, None, 0);
    }
}

/// Normal-approximation 95% half-width of a proportion `k / n`.
pub fn proportion_ci95(k: u64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    let p = k as f64 / n as f64;
    1.96 * (p * (1.0 - p) / n as f64).sqrt()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], w: W) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    if rows.is_empty() {
        wr.write_record(["experiment", "sweep_var", "sweep_val", "metric", "value", "ci95", "trials", "seed"])?;
    }
    wr.flush()?;
    Ok(())
}
