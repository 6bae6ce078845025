//! The heuristics-discovery loop: coder / evaluator / repairer.
//!
//! Each iteration targets one candidate slot (round-robin by default). The
//! coder generates a replacement body from the rendered prompt; generations
//! synonymous with the current program are regenerated once and dropped if
//! still synonymous; programs that fail to parse or check get exactly one
//! repair attempt; surviving programs are evaluated and integrated only on a
//! strictly better PAR-2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use modsat_core::dsl::{self, Diagnostic, DslProgram};
use modsat_core::hooks::Slot;
use modsat_core::HeuristicSuite;
use modsat_core::Strategy;
use modsat_llm::{ChatRequest, LlmClient};

use crate::keycode::{current_program, key_code};
use crate::objective::SuiteObjective;
use crate::prompt::{render, PromptTemplate};
use crate::AutoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepOutcome {
    /// Evaluated and strictly better: integrated into the suite.
    Improved,
    /// Evaluated but not better.
    NotBetter,
    /// Both the generation and its regeneration were synonymous.
    Synonymous,
    /// Still failing parse/check after the one repair attempt.
    RejectedAfterRepair,
    /// Coder or repairer transport failure.
    TransportFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoverStep {
    pub iteration: usize,
    pub slot: u8,
    pub outcome: StepOutcome,
    /// PAR-2 of the evaluated candidate, when one was evaluated.
    pub score: Option<f64>,
    /// Incumbent PAR-2 after the iteration.
    pub incumbent: f64,
    /// Whether the evaluated program came from a repair.
    pub repaired: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscoverOutcome {
    pub par2: f64,
    pub initial_par2: f64,
    pub history: Vec<DiscoverStep>,
    #[serde(skip)]
    pub suite: HeuristicSuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotSelection {
    RoundRobin,
    UniformRandom,
}

#[derive(Debug, Clone)]
pub struct DiscoverConfig {
    pub max_iter: usize,
    pub selection: SlotSelection,
    pub seed: u64,
    pub coder_temperature: f64,
    pub repair_temperature: f64,
}

impl Default for DiscoverConfig {
    fn default() -> DiscoverConfig {
        DiscoverConfig {
            max_iter: 20,
            selection: SlotSelection::RoundRobin,
            seed: 0,
            coder_temperature: 0.8,
            repair_temperature: 0.0,
        }
    }
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

enum Generation {
    Program(DslProgram),
    Invalid {
        source: String,
        diagnostics: Vec<Diagnostic>,
    },
    NoMarkers {
        text: String,
    },
}

fn generate(
    coder: &dyn LlmClient,
    prompt: &str,
    slot: Slot,
    temperature: f64,
) -> Result<Generation, AutoError> {
    let req = ChatRequest::new("", prompt).with_temperature(temperature);
    let text = coder.complete(&req).map_err(AutoError::Llm)?;
    Ok(classify(&text, slot))
}

fn classify(text: &str, slot: Slot) -> Generation {
    match dsl::extract_marked(text, slot) {
        None => Generation::NoMarkers {
            text: text.to_string(),
        },
        Some(source) => match dsl::compile(&source, slot) {
            Ok(program) => Generation::Program(program),
            Err(diagnostics) => Generation::Invalid {
                source,
                diagnostics,
            },
        },
    }
}

fn repair(
    repairer: &dyn LlmClient,
    slot: Slot,
    source: &str,
    problem: &str,
    key: &str,
    temperature: f64,
) -> Result<Generation, AutoError> {
    let req = ChatRequest::new(
        "You fix rejected SAT-solver heuristic programs. Reply with the corrected function \
         body wrapped in its '// start'/'// end' markers and nothing else.",
        format!(
            "The {slot} program below was rejected.\n\nProblem:\n{problem}\n\n\
             Program:\n// start {slot}\n{source}\n// end {slot}\n\n\
             Context:\n{key}"
        ),
    )
    .with_temperature(temperature);
    let text = repairer.complete(&req).map_err(AutoError::Llm)?;
    Ok(classify(&text, slot))
}

/// Runs the discovery loop; evaluation happens on the full dataset.
#[allow(clippy::too_many_arguments)]
pub fn discover(
    objective: &mut dyn SuiteObjective,
    candidates: &[Slot],
    initial: HeuristicSuite,
    template: &PromptTemplate,
    coder: &dyn LlmClient,
    repairer: &dyn LlmClient,
    config: &DiscoverConfig,
) -> Result<DiscoverOutcome, AutoError> {
    if candidates.is_empty() {
        return Err(AutoError::BadParams(
            "discover needs candidate slots".into(),
        ));
    }
    let all: Vec<usize> = (0..objective.len()).collect();
    if all.is_empty() {
        return Err(AutoError::BadParams(
            "discover needs a nonempty dataset".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut incumbent = initial;
    let mut best = objective.evaluate(&incumbent, &all)?;
    let initial_par2 = best;
    let mut history = Vec::with_capacity(config.max_iter);

    for iteration in 0..config.max_iter {
        let slot = match config.selection {
            SlotSelection::RoundRobin => candidates[iteration % candidates.len()],
            SlotSelection::UniformRandom => candidates[rng.random_range(0..candidates.len())],
        };
        let key = key_code(slot, &incumbent);
        let prompt = render(template, slot, &key)?;
        let reference = current_program(&incumbent, slot);

        let record =
            |outcome: StepOutcome, score: Option<f64>, best: f64, repaired: bool| DiscoverStep {
                iteration,
                slot: slot.index(),
                outcome,
                score,
                incumbent: best,
                repaired,
            };

        // Generation, with one regeneration on a synonymous result.
        let mut repaired = false;
        let generation = match generate(coder, &prompt, slot, config.coder_temperature) {
            Ok(g) => g,
            Err(_) => {
                history.push(record(StepOutcome::TransportFailed, None, best, false));
                continue;
            }
        };
        let generation = match generation {
            Generation::Program(p) if dsl::is_synonymous(&p, &reference) => {
                match generate(coder, &prompt, slot, config.coder_temperature) {
                    Ok(Generation::Program(p2)) if dsl::is_synonymous(&p2, &reference) => {
                        history.push(record(StepOutcome::Synonymous, None, best, false));
                        continue;
                    }
                    Ok(other) => other,
                    Err(_) => {
                        history.push(record(StepOutcome::TransportFailed, None, best, false));
                        continue;
                    }
                }
            }
            other => other,
        };

        // Validation, with one repair attempt on failure.
        let program = match generation {
            Generation::Program(p) => p,
            Generation::Invalid {
                source,
                diagnostics,
            } => {
                repaired = true;
                let fixed = match repair(
                    repairer,
                    slot,
                    &source,
                    &render_diagnostics(&diagnostics),
                    &key,
                    config.repair_temperature,
                ) {
                    Ok(g) => g,
                    Err(_) => {
                        history.push(record(StepOutcome::TransportFailed, None, best, true));
                        continue;
                    }
                };
                match fixed {
                    Generation::Program(p) => p,
                    _ => {
                        history.push(record(StepOutcome::RejectedAfterRepair, None, best, true));
                        continue;
                    }
                }
            }
            Generation::NoMarkers { text } => {
                repaired = true;
                let fixed = match repair(
                    repairer,
                    slot,
                    &text,
                    "output did not contain the required // start / // end marker lines",
                    &key,
                    config.repair_temperature,
                ) {
                    Ok(g) => g,
                    Err(_) => {
                        history.push(record(StepOutcome::TransportFailed, None, best, true));
                        continue;
                    }
                };
                match fixed {
                    Generation::Program(p) => p,
                    _ => {
                        history.push(record(StepOutcome::RejectedAfterRepair, None, best, true));
                        continue;
                    }
                }
            }
        };

        // Evaluation and integration on strict improvement.
        let candidate = incumbent.with_slot(slot, Strategy::Dsl(program));
        let score = objective.evaluate(&candidate, &all)?;
        if score < best {
            incumbent = candidate;
            best = score;
            history.push(record(StepOutcome::Improved, Some(score), best, repaired));
        } else {
            history.push(record(StepOutcome::NotBetter, Some(score), best, repaired));
        }
    }

    Ok(DiscoverOutcome {
        par2: best,
        initial_par2,
        history,
        suite: incumbent,
    })
}
