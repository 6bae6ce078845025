//! `modsat report`: summaries and plot data from recorded runs.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args as ClapArgs;

use modsat_bench::par2;
use modsat_bench::report::{cactus_data, read_records, write_report};

use super::{load_config, usage};

#[derive(ClapArgs)]
pub struct Args {
    /// Record file (JSON lines) produced by `bench --records`.
    #[arg(long)]
    pub records: PathBuf,
    /// Timeout bound used for scoring.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Emit time-sorted solved counts (cactus plot data) instead of a
    /// summary.
    #[arg(long)]
    pub plot: bool,
    /// Unused; accepted for interface uniformity.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Shared run configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<i32> {
    let config = load_config(&args.config)?;
    let records = read_records(&args.records)?;
    if records.is_empty() {
        return Err(usage("record file is empty"));
    }
    let timeout = args
        .timeout
        .or(config.timeout_s)
        .ok_or_else(|| usage("--timeout is required"))?;
    if args.plot {
        let data = cactus_data(&records, timeout);
        match &args.out {
            Some(path) => std::fs::write(path, data)?,
            None => print!("{data}"),
        }
    } else {
        let report = par2(&records, timeout)?;
        println!(
            "par2={:.6} solved={}/{} timeout={}",
            report.par2, report.solved, report.total, report.timeout
        );
        if let Some(path) = &args.out {
            write_report(path, &report)?;
        }
    }
    Ok(0)
}
