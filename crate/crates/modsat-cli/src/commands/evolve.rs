//! `modsat evolve`: (1+λ) evolutionary search over retained slots.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args as ClapArgs;
use serde::Serialize;

use modsat_auto::evolve::{evolve, EvolveStep, LlmGenerator, OffspringGenerator, PresetGenerator};
use modsat_auto::objective::BenchObjective;
use modsat_core::hooks::registry;
use modsat_core::{HeuristicSuite, Strategy};

use super::{
    build_llm, load_config, load_dataset, load_suite, load_template, parse_time_model,
    resolve_candidates, solver_config, usage, write_json,
};

#[derive(ClapArgs)]
pub struct Args {
    /// Dataset manifest.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Evaluation budget.
    #[arg(long, default_value_t = 50)]
    pub budget: usize,
    /// Offspring per generation.
    #[arg(long, default_value_t = 1)]
    pub lambda: usize,
    /// Search seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Retained slot indices, e.g. `2,5,6,7`; defaults to the manifest's
    /// candidate list.
    #[arg(long)]
    pub candidates: Option<String>,
    /// Initial suite; defaults to all baselines.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Offspring source: `preset` (discovered presets, LLM-free) or `llm`.
    #[arg(long, default_value = "preset")]
    pub generator: String,
    /// LLM mode when --generator llm: `live` | `replay:<path>` | `record:<path>`.
    #[arg(long)]
    pub llm: Option<String>,
    /// Prompt template for the llm generator.
    #[arg(long)]
    pub template: Option<PathBuf>,
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
struct EvolveDoc {
    initial_par2: f64,
    par2: f64,
    evaluations: usize,
    history: Vec<EvolveStep>,
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
    let retained = resolve_candidates(&args.candidates, &dataset)?;
    let initial = load_suite(args.suite.as_deref().or(config.suite.as_deref()))?;
    let cfg = solver_config(config.solver.clone(), Some(seed))?;

    let mut objective = BenchObjective::new(dataset, cfg, timeout)
        .with_jobs(jobs)
        .with_time_model(time_model);

    let outcome = match args.generator.as_str() {
        "preset" => {
            let mut generator = PresetGenerator {
                f: |slot, _incumbent: &HeuristicSuite| {
                    Strategy::native(registry::discovered_id(slot))
                },
            };
            evolve(
                &mut objective,
                &retained,
                initial,
                &mut generator,
                args.lambda,
                args.budget,
                seed,
            )?
        }
        "llm" => {
            let mode = args
                .llm
                .as_deref()
                .or(config.llm.as_deref())
                .ok_or_else(|| usage("--llm is required with --generator llm"))?;
            let client = build_llm(mode)?;
            let template = load_template(args.template.as_deref().or(config.template.as_deref()))?;
            let mut generator: LlmGenerator = LlmGenerator::new(client, template, 0.8);
            evolve(
                &mut objective,
                &retained,
                initial,
                &mut generator as &mut dyn OffspringGenerator,
                args.lambda,
                args.budget,
                seed,
            )?
        }
        other => return Err(usage(format!("unknown generator `{other}` (preset|llm)"))),
    };

    println!(
        "evolve: par2 {:.6} -> {:.6} over {} evaluations",
        outcome.initial_par2, outcome.par2, outcome.evaluations
    );
    if let Some(path) = &args.out {
        write_json(
            path,
            &EvolveDoc {
                initial_par2: outcome.initial_par2,
                par2: outcome.par2,
                evaluations: outcome.evaluations,
                history: outcome.history.clone(),
            },
        )?;
        std::fs::write(path.with_extension("suite.json"), outcome.suite.to_json())?;
    }
    Ok(0)
}
