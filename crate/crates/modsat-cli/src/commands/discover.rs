//! `modsat discover`: the coder/evaluator/repairer loop.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args as ClapArgs;
use serde::Serialize;

use modsat_auto::discover::{discover, DiscoverConfig, DiscoverStep, SlotSelection};
use modsat_auto::objective::BenchObjective;

use super::{
    build_llm, load_config, load_dataset, load_suite, load_template, parse_time_model,
    resolve_candidates, solver_config, usage, write_json,
};

#[derive(ClapArgs)]
pub struct Args {
    /// Dataset manifest.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Iteration budget.
    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,
    /// Seed (slot selection in random mode).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Candidate slot indices, e.g. `2,5,6,7`; defaults to the manifest's
    /// candidate list.
    #[arg(long)]
    pub candidates: Option<String>,
    /// Slot selection policy: round-robin | random.
    #[arg(long, default_value = "round-robin")]
    pub selection: String,
    /// Initial suite; defaults to all baselines.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Prompt template; defaults to the built-in original template.
    #[arg(long)]
    pub template: Option<PathBuf>,
    /// LLM mode: `live` | `replay:<path>` | `record:<path>`.
    #[arg(long)]
    pub llm: Option<String>,
    /// Per-instance timeout; defaults to the manifest's training timeout.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Concurrent solver jobs.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// `wall` or `ticks`.
    #[arg(long)]
    pub time_model: Option<String>,
    /// Output path; also writes `<out>.suite.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Shared run configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct DiscoverDoc {
    initial_par2: f64,
    par2: f64,
    history: Vec<DiscoverStep>,
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
    let candidates = resolve_candidates(&args.candidates, &dataset)?;
    let initial = load_suite(args.suite.as_deref().or(config.suite.as_deref()))?;
    let template = load_template(args.template.as_deref().or(config.template.as_deref()))?;
    let selection = match args.selection.as_str() {
        "round-robin" => SlotSelection::RoundRobin,
        "random" => SlotSelection::UniformRandom,
        other => return Err(usage(format!("unknown selection `{other}`"))),
    };
    let mode = args
        .llm
        .as_deref()
        .or(config.llm.as_deref())
        .ok_or_else(|| usage("--llm is required (live | replay:<path> | record:<path>)"))?;
    let client = build_llm(mode)?;
    let cfg = solver_config(config.solver.clone(), Some(seed))?;

    let mut objective = BenchObjective::new(dataset, cfg, timeout)
        .with_jobs(jobs)
        .with_time_model(time_model);
    let outcome = discover(
        &mut objective,
        &candidates,
        initial,
        &template,
        client.as_ref(),
        client.as_ref(),
        &DiscoverConfig {
            max_iter: args.max_iter,
            selection,
            seed,
            ..Default::default()
        },
    )?;

    println!(
        "discover: par2 {:.6} -> {:.6} over {} iterations",
        outcome.initial_par2,
        outcome.par2,
        outcome.history.len()
    );
    for step in &outcome.history {
        println!(
            "  it{} slot{} {:?} score={:?}",
            step.iteration, step.slot, step.outcome, step.score
        );
    }
    if let Some(path) = &args.out {
        write_json(
            path,
            &DiscoverDoc {
                initial_par2: outcome.initial_par2,
                par2: outcome.par2,
                history: outcome.history.clone(),
            },
        )?;
        std::fs::write(path.with_extension("suite.json"), outcome.suite.to_json())?;
    }
    Ok(0)
}
