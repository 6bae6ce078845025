//! The automated-optimization stack around the solver: code-diversity
//! scoring, prompt optimization, presearch screening, the (1+λ) evolutionary
//! search and the coder/evaluator/repairer discovery loop.

pub mod discover;
pub mod diversity;
pub mod evolve;
pub mod keycode;
pub mod objective;
pub mod presearch;
pub mod prompt;
pub mod scenario;

use thiserror::Error;

pub use discover::{discover, DiscoverConfig, DiscoverOutcome, SlotSelection, StepOutcome};
pub use evolve::{evolve, EvolveOutcome, OffspringGenerator, PresetGenerator};
pub use objective::{BenchObjective, ScriptedObjective, SuiteObjective};
pub use presearch::{presearch, PresearchOutcome};
pub use prompt::{optimize_prompt, render, PromptOptOptions, PromptTemplate};

#[derive(Debug, Error)]
pub enum AutoError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("template: {0}")]
    Template(String),
    #[error("embedding: {0}")]
    Embedding(String),
    #[error("generator: {0}")]
    Generator(String),
    #[error(transparent)]
    Llm(#[from] modsat_llm::LlmError),
    #[error(transparent)]
    Bench(#[from] modsat_bench::BenchError),
}

/// Shipped prompt-template fixtures.
pub mod fixtures {
    pub const ORIGINAL_PROMPT: &str = include_str!("../fixtures/prompts/original.prompt");
    pub const UPDATED_PROMPT: &str = include_str!("../fixtures/prompts/updated.prompt");
}
