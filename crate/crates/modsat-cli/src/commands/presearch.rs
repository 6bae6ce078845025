//! `modsat presearch`: compact-subset screening of the seven hook slots.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args as ClapArgs;

use modsat_auto::objective::BenchObjective;
use modsat_auto::presearch::presearch;
use modsat_core::HeuristicSuite;

use super::{
    load_config, load_dataset, load_suite, parse_time_model, solver_config, usage, write_json,
};

#[derive(ClapArgs)]
pub struct Args {
    /// Dataset manifest.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Per-instance timeout; defaults to the manifest's training timeout.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Shuffle/solver seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// The full suite screened against (slot i is swapped to baseline when
    /// probing slot i); defaults to all discovered presets.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Concurrent solver jobs.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// `wall` or `ticks`.
    #[arg(long)]
    pub time_model: Option<String>,
    /// Output path for the screening outcome.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Shared run configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<i32> {
    let config = load_config(&args.config)?;
    let manifest_path = args
        .dataset
        .or(config.dataset.clone())
        .ok_or_else(|| usage("--dataset is required"))?;
    let dataset = load_dataset(&manifest_path)?;
    let timeout = args
        .timeout
        .or(config.timeout_s)
        .unwrap_or(dataset.training_timeout_s);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let jobs = args.jobs.or(config.jobs).unwrap_or(1);
    let time_model = parse_time_model(
        args.time_model
            .as_deref()
            .or(config.time_model.as_deref())
            .unwrap_or("ticks"),
    )?;
    let full_suite = match args.suite.as_deref().or(config.suite.as_deref()) {
        Some(p) => load_suite(Some(p))?,
        None => HeuristicSuite::all_discovered(),
    };
    let cfg = solver_config(config.solver.clone(), Some(seed))?;

    let mut objective = BenchObjective::new(dataset, cfg, timeout)
        .with_jobs(jobs)
        .with_time_model(time_model);
    let outcome = presearch(
        &mut objective,
        &HeuristicSuite::all_baseline(),
        &full_suite,
        seed,
    )?;

    println!("retained slots: {:?}", outcome.retained);
    for (slot, score) in &outcome.scores {
        println!("  slot {slot}: par2 {score:.6}");
    }
    if let Some(path) = &args.out {
        write_json(path, &outcome)?;
    }
    Ok(0)
}
