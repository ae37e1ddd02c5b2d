use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use umi_cli::experiments::{optimize_table, outage_sweep_table, pattern_cdf_table, run_validation, validation_table};
use umi_cli::{ExperimentConfig, Format, Table};
use umi_core::exec::Execution;
use umi_core::validation::CRITERIA;

#[derive(Parser)]
#[command(name = "umi", version, about = "Outage analysis for UAV-mounted reflecting surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML config; every key defaults to the reference link.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides `sim.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Pattern-gain CDF, sectoral model against simulation.
    PatternCdf,
    /// Outage against transmit power, closed forms against simulation.
    OutageSweep,
    /// Outage profile over square arrays and the minimizing element count.
    OptimizeN,
    /// Acceptance checks as a pass/fail report; exits 1 on any failure.
    Validate {
        /// Comma-separated criteria (C1..C10); all when omitted, none when empty.
        #[arg(long)]
        criteria: Option<String>,
    },
}

fn emit(table: &Table, common: &Common) -> Result<()> {
    match &common.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            table.write(common.format, &mut w)?;
            w.flush()?;
        }
        None => table.write(common.format, io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = &cli.common;
    let execution = match common.threads {
        Some(0) => anyhow::bail!("--threads must be at least 1"),
        Some(1) => Execution::Sequential,
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("starting the worker pool")?;
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::reference(),
    };
    if let Some(seed) = common.seed {
        cfg.set_seed(seed);
    }

    let table = match &cli.command {
        Command::PatternCdf => pattern_cdf_table(&cfg, execution)?,
        Command::OutageSweep => outage_sweep_table(&cfg, execution)?,
        Command::OptimizeN => optimize_table(&cfg, execution)?,
        Command::Validate { criteria } => {
            let ids: Vec<&str> = match criteria {
                None => CRITERIA.to_vec(),
                Some(list) => list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect(),
            };
            let reports = run_validation(&cfg, &ids, execution);
            let mut err = io::stderr().lock();
            for r in &reports {
                writeln!(err, "{}", r.line())?;
            }
            emit(&validation_table(&reports), common)?;
            let failed = reports.iter().any(|r| !r.pass);
            return Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
    };
    emit(&table, common)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
