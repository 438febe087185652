use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sim_harness::{run, write_csv, ExperimentConfig, ExperimentKind, HarnessError};

#[derive(Parser)]
#[command(name = "sim-harness", version, about = "Seeded DAFT link experiments with CSV output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args)]
struct Opts {
    /// JSON experiment config; desk-scale defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (all cores when absent).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the full-scale default config for the subcommand and exit.
    #[arg(long, global = true)]
    print_defaults: bool,
    /// Exit with code 3 if any acceptance threshold fails.
    #[arg(long, global = true)]
    check: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    ValidateInterference,
    BerSweep,
    ThroughputVsIsr,
    OptimizeNd,
    EndToEndPackets,
}

impl Command {
    fn kind(self) -> ExperimentKind {
        match self {
            Command::ValidateInterference => ExperimentKind::ValidateInterference,
            Command::BerSweep => ExperimentKind::BerSweep,
            Command::ThroughputVsIsr => ExperimentKind::ThroughputVsIsr,
            Command::OptimizeNd => ExperimentKind::OptimizeNd,
            Command::EndToEndPackets => ExperimentKind::EndToEndPackets,
        }
    }
}

fn load(kind: ExperimentKind, o: &Opts) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text).map_err(|e| match e {
                HarnessError::Config(m) => HarnessError::Config(format!("{}: {m}", path.display())),
                other => other,
            })?
        }
        None => ExperimentConfig::desk_for(kind),
    };
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<bool, HarnessError> {
    let kind = cli.command.kind();
    let o = &cli.opts;
    if o.print_defaults {
        let cfg = ExperimentConfig::default().for_kind(kind);
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serialises"));
        return Ok(true);
    }
    let cfg = load(kind, o)?;
    if let Some(n) = o.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| HarnessError::Config(format!("threads: {e}")))?;
    }
    let report = run(kind, &cfg)?;
    match &o.out {
        Some(path) => write_csv(&report.rows, BufWriter::new(File::create(path)?))?,
        None => write_csv(&report.rows, io::stdout().lock())?,
    }
    let mut err = io::stderr().lock();
    for c in &report.checks {
        let _ = writeln!(err, "{}: {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(passed) if passed || !cli.opts.check => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
