//! `modsat tune`: random search over the configuration space.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args as ClapArgs;
use serde::Serialize;

use modsat_bench::par2;
use modsat_bench::runner::run_dataset;
use modsat_bench::tune::{tune_random, TuneTrial};
use modsat_core::solver::SolverConfig;

use super::{load_config, load_dataset, load_suite, parse_time_model, usage, write_json};

#[derive(ClapArgs)]
pub struct Args {
    /// Dataset manifest.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Number of sampled configurations.
    #[arg(long, default_value_t = 50)]
    pub budget: usize,
    /// Sampling seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-instance timeout; defaults to the manifest's training timeout.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Heuristic suite under which configs are scored.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Concurrent solver jobs per evaluation.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// `wall` or `ticks`.
    #[arg(long)]
    pub time_model: Option<String>,
    /// Output path for the best config and trial trace.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Shared run configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct TuneDoc {
    best: SolverConfig,
    best_par2: f64,
    trials: Vec<TuneTrial>,
}

pub fn run(args: Args) -> Result<i32> {
    let config = load_config(&args.config)?;
    let manifest_path = args
        .dataset
        .or(config.dataset.clone())
        .ok_or_else(|| usage("--dataset is required"))?;
    let dataset = load_dataset(&manifest_path)?;
    let suite = load_suite(args.suite.as_deref().or(config.suite.as_deref()))?;
    let timeout = args
        .timeout
        .or(config.timeout_s)
        .unwrap_or(dataset.training_timeout_s);
    let jobs = args.jobs.or(config.jobs).unwrap_or(1);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let time_model = parse_time_model(
        args.time_model
            .as_deref()
            .or(config.time_model.as_deref())
            .unwrap_or("ticks"),
    )?;
    let base = SolverConfig {
        seed,
        ..config.solver.clone().unwrap_or_default()
    };

    let (best, best_par2, trials) = tune_random(args.budget, seed, &base, |cfg| {
        let records = run_dataset(&dataset.instances, &suite, cfg, timeout, jobs, time_model);
        par2(&records, timeout)
            .map(|r| r.par2)
            .unwrap_or(f64::INFINITY)
    })
    .map_err(|e| usage(e.to_string()))?;

    println!(
        "best par2={best_par2:.6} var_decay={:.4} cla_decay={:.4} rfirst={} gc_frac={:.3}",
        best.var_decay, best.cla_decay, best.rfirst, best.gc_frac
    );
    if let Some(path) = &args.out {
        write_json(
            path,
            &TuneDoc {
                best,
                best_par2,
                trials,
            },
        )?;
    }
    Ok(0)
}
