//! `modsat prompt-opt`: entropy-guided prompt refinement.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args as ClapArgs;

use modsat_auto::keycode::baseline_key_code;
use modsat_auto::prompt::{default_scorer, optimize_prompt, PromptOptOptions};
use modsat_core::Slot;

use super::{build_llm, load_config, load_template, usage, write_json};

#[derive(ClapArgs)]
pub struct Args {
    /// Template file to start from; defaults to the built-in original.
    #[arg(long)]
    pub template: Option<PathBuf>,
    /// Target hook slot (by name, e.g. restart_condition).
    #[arg(long, default_value = "restart_condition")]
    pub slot: String,
    /// Outer refinement iterations.
    #[arg(long, default_value_t = 10)]
    pub iters: usize,
    /// Generations per iteration.
    #[arg(long, default_value_t = 20)]
    pub gens: usize,
    /// Minimum parse/check success rate for acceptance.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Seed for section choice and clustering.
    #[arg(long)]
    pub seed: Option<u64>,
    /// LLM mode: `live` | `replay:<path>` | `record:<path>`.
    #[arg(long)]
    pub llm: Option<String>,
    /// Output path for the optimized template; history goes to
    /// `<out>.history.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Shared run configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<i32> {
    let config = load_config(&args.config)?;
    let slot = Slot::from_name(&args.slot)
        .ok_or_else(|| usage(format!("unknown slot `{}`", args.slot)))?;
    let template = load_template(args.template.as_deref().or(config.template.as_deref()))?;
    let mode = args
        .llm
        .as_deref()
        .or(config.llm.as_deref())
        .ok_or_else(|| usage("--llm is required (live | replay:<path> | record:<path>)"))?;
    let client = build_llm(mode)?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let opts = PromptOptOptions {
        iterations: args.iters,
        generations: args.gens,
        success_threshold: args.threshold,
        seed,
        ..Default::default()
    };
    let key = baseline_key_code(slot);
    let scorer = default_scorer(seed);
    let outcome = optimize_prompt(&template, slot, &key, client.as_ref(), &scorer, &opts)?;

    for step in &outcome.history {
        println!(
            "it{} part={} diversity={:.4} success={:.2} accepted={}",
            step.iteration, step.part, step.diversity, step.success_rate, step.accepted
        );
    }
    if let Some(path) = &args.out {
        std::fs::write(path, outcome.template.render_file())?;
        write_json(&path.with_extension("history.json"), &outcome.history)?;
    }
    Ok(0)
}
