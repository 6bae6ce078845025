//! `modsat bench`: evaluate one suite over a dataset.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use clap::Args as ClapArgs;

use modsat_bench::par2::RunRecord;
use modsat_bench::report::{append_records, cactus_data, write_report};
use modsat_bench::runner::{run_dataset, suite_digest};
use modsat_bench::{par2, DatasetManifest};
use modsat_core::solver::{SolveStatus, Stats};
use modsat_core::HeuristicSuite;

use super::{load_config, load_dataset, load_suite, parse_time_model, solver_config, usage};

#[derive(ClapArgs)]
pub struct Args {
    /// Dataset manifest.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Heuristic suite file; defaults to all baselines.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Per-instance timeout in seconds; defaults to the manifest's training
    /// timeout.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Concurrent solver jobs.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Solver seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report output path (JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also append per-instance records here (JSON lines).
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// `wall` or `ticks` (deterministic).
    #[arg(long)]
    pub time_model: Option<String>,
    /// Run each instance in a separate `modsat solve` process with a hard
    /// kill at 110% of the timeout. Implies wall-clock timing.
    #[arg(long)]
    pub subprocess: bool,
    /// Shared run configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<i32> {
    let config = load_config(&args.config)?;
    let manifest_path = args
        .dataset
        .clone()
        .or(config.dataset.clone())
        .ok_or_else(|| usage("--dataset is required"))?;
    let dataset = load_dataset(&manifest_path)?;
    let suite_path = args.suite.clone().or(config.suite.clone());
    let suite = load_suite(suite_path.as_deref())?;
    let timeout = args
        .timeout
        .or(config.timeout_s)
        .unwrap_or(dataset.training_timeout_s);
    let jobs = args.jobs.or(config.jobs).unwrap_or(1);
    let cfg = solver_config(config.solver.clone(), args.seed.or(config.seed))?;
    let time_model = parse_time_model(
        args.time_model
            .as_deref()
            .or(config.time_model.as_deref())
            .unwrap_or("ticks"),
    )?;

    let records = if args.subprocess {
        run_subprocess(
            &manifest_path,
            &suite,
            suite_path.as_deref(),
            cfg.seed,
            timeout,
        )?
    } else {
        run_dataset(&dataset.instances, &suite, &cfg, timeout, jobs, time_model)
    };

    let report = par2(&records, timeout)?;
    println!(
        "dataset={} suite={} par2={:.6} solved={}/{}",
        dataset.name,
        suite_digest(&suite),
        report.par2,
        report.solved,
        report.total
    );
    for r in &report.per_instance {
        println!(
            "  {}\t{:?}\t{:.6}\t{:.6}",
            r.instance, r.status, r.wall_time, r.penalized
        );
    }
    if let Some(path) = &args.records {
        append_records(path, &records)?;
    }
    if let Some(path) = &args.out {
        write_report(path, &report)?;
        let plot = cactus_data(&records, timeout);
        std::fs::write(path.with_extension("cactus.tsv"), plot)?;
    }
    Ok(0)
}

/// Spawns `modsat solve` per instance with an external hard kill at
/// timeout + 10%.
fn run_subprocess(
    manifest_path: &std::path::Path,
    suite: &HeuristicSuite,
    suite_path: Option<&std::path::Path>,
    seed: u64,
    timeout: f64,
) -> Result<Vec<RunRecord>> {
    let exe = std::env::current_exe().context("locating own executable")?;
    let (manifest, base) = DatasetManifest::load(manifest_path)?;
    let digest = suite_digest(suite);
    let mut records = Vec::new();
    for name in &manifest.instances {
        let path = base.join(name);
        let start = Instant::now();
        let mut cmd = std::process::Command::new(&exe);
        cmd.arg("solve")
            .arg(&path)
            .arg("--timeout")
            .arg(timeout.to_string())
            .arg("--seed")
            .arg(seed.to_string())
            .arg("--no-model")
            .stdout(std::process::Stdio::null())
            .stderr(std::process::Stdio::null());
        if let Some(sp) = suite_path {
            cmd.arg("--suite").arg(sp);
        }
        let mut child = cmd.spawn().context("spawning solver subprocess")?;
        let deadline = Duration::from_secs_f64(timeout * 1.1);
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break Some(status);
            }
            if start.elapsed() >= deadline {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            std::thread::sleep(Duration::from_millis(5));
        };
        let wall_time = start.elapsed().as_secs_f64();
        let status = match status.and_then(|s| s.code()) {
            Some(10) => SolveStatus::Sat,
            Some(20) => SolveStatus::Unsat,
            _ => SolveStatus::Unknown,
        };
        records.push(RunRecord {
            instance: name.clone(),
            status,
            wall_time,
            stats: Stats::default(),
            suite: digest.clone(),
            seed,
            fault: None,
        });
    }
    Ok(records)
}
