//! Subcommand implementations and the helpers they share.

pub mod bench;
pub mod discover;
pub mod evolve;
pub mod gen;
pub mod presearch;
pub mod prompt_opt;
pub mod report;
pub mod solve;
pub mod tune;

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};

use modsat_auto::prompt::PromptTemplate;
use modsat_bench::runner::TimeModel;
use modsat_bench::LoadedDataset;
use modsat_core::solver::SolverConfig;
use modsat_core::HeuristicSuite;
use modsat_llm::{HttpClient, LlmClient, RecordingClient, ReplayClient};

use crate::config::RunConfigFile;

/// Marker for command-line misuse; mapped to exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

pub fn load_config(path: &Option<PathBuf>) -> Result<RunConfigFile> {
    match path {
        Some(p) => RunConfigFile::load(p),
        None => Ok(RunConfigFile::default()),
    }
}

pub fn parse_time_model(name: &str) -> Result<TimeModel> {
    match name {
        "wall" => Ok(TimeModel::Wall),
        "ticks" => Ok(TimeModel::deterministic()),
        other => Err(usage(format!("unknown time model `{other}` (wall|ticks)"))),
    }
}

pub fn load_suite(path: Option<&Path>) -> Result<HeuristicSuite> {
    match path {
        None => Ok(HeuristicSuite::all_baseline()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading suite {}", p.display()))?;
            HeuristicSuite::from_json(&text)
                .map_err(|e| usage(format!("suite {}: {e}", p.display())))
        }
    }
}

pub fn load_dataset(path: &Path) -> Result<LoadedDataset> {
    LoadedDataset::from_manifest(path)
        .with_context(|| format!("loading dataset {}", path.display()))
}

pub fn load_template(path: Option<&Path>) -> Result<PromptTemplate> {
    match path {
        None => Ok(PromptTemplate::parse(
            modsat_auto::fixtures::ORIGINAL_PROMPT,
        )?),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading template {}", p.display()))?;
            Ok(PromptTemplate::parse(&text)?)
        }
    }
}

/// Builds the LLM backend from a mode string: `live`, `replay:<path>` or
/// `record:<path>` (live, with the transcript appended to the path).
pub fn build_llm(mode: &str) -> Result<Box<dyn LlmClient>> {
    if mode == "live" {
        return Ok(Box::new(HttpClient::from_env()?));
    }
    if let Some(path) = mode.strip_prefix("replay:") {
        return Ok(Box::new(ReplayClient::from_file(Path::new(path))?));
    }
    if let Some(path) = mode.strip_prefix("record:") {
        let live = HttpClient::from_env()?;
        return Ok(Box::new(RecordingClient::new(live, PathBuf::from(path))));
    }
    Err(usage(format!(
        "unknown llm mode `{mode}` (live | replay:<path> | record:<path>)"
    )))
}

/// Hook-candidate indices from a flag like `2,5,6,7`, falling back to the
/// manifest's list, falling back to all seven.
pub fn resolve_candidates(
    flag: &Option<String>,
    dataset: &LoadedDataset,
) -> Result<Vec<modsat_core::Slot>> {
    let indices: Vec<u8> = match flag {
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u8>()
                    .map_err(|_| usage(format!("bad slot index `{s}`")))
            })
            .collect::<Result<_>>()?,
        None if !dataset.function_candidates.is_empty() => dataset.function_candidates.clone(),
        None => (1..=7).collect(),
    };
    indices
        .iter()
        .map(|&i| {
            modsat_core::Slot::from_index(i)
                .ok_or_else(|| usage(format!("slot index {i} outside 1..=7")))
        })
        .collect()
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, serde_json::to_string_pretty(value)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn solver_config(base: Option<SolverConfig>, seed: Option<u64>) -> Result<SolverConfig> {
    let mut cfg = base.unwrap_or_default();
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}
