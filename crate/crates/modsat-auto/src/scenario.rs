//! A self-contained, fully deterministic discovery scenario over a seeded
//! micro-dataset. The recorded transcript and its expected outcome ship as
//! fixtures; tests replay the transcript and must reproduce the outcome bit
//! for bit. The scenario exercises the three interesting generation paths:
//! clean improvements, a broken-then-repaired program, and synonymous
//! generations.

use serde::{Deserialize, Serialize};

use modsat_bench::generate::random_3sat;
use modsat_bench::runner::TimeModel;
use modsat_bench::LoadedDataset;
use modsat_core::dsl::{self, transcriptions};
use modsat_core::hooks::Slot;
use modsat_core::solver::SolverConfig;
use modsat_core::{HeuristicSuite, Strategy};
use modsat_llm::LlmClient;

use crate::discover::{discover, DiscoverConfig, DiscoverOutcome, DiscoverStep};
use crate::objective::BenchObjective;
use crate::prompt::PromptTemplate;
use crate::AutoError;

pub const INSTANCES: usize = 10;
pub const NUM_VARS: usize = 60;
pub const DATASET_SEED: u64 = 1000;
pub const TIMEOUT_S: f64 = 0.02;

/// The slots the scenario iterates over, in round-robin order.
pub fn candidates() -> Vec<Slot> {
    vec![
        Slot::RestartCondition,
        Slot::ReduceCondition,
        Slot::RephaseCondition,
        Slot::VarBumpActivity,
    ]
}

pub fn micro_dataset() -> LoadedDataset {
    let m = (NUM_VARS as f64 * 4.26).round() as usize;
    let instances = (0..INSTANCES)
        .map(|i| {
            (
                format!("micro-{i:02}.cnf"),
                random_3sat(NUM_VARS, m, DATASET_SEED + i as u64),
            )
        })
        .collect();
    LoadedDataset {
        name: "discover-micro".into(),
        instances,
        training_timeout_s: TIMEOUT_S,
        function_candidates: candidates().iter().map(|s| s.index()).collect(),
    }
}

/// Starting suite: three condition slots pinned to degenerate always-fire
/// programs (so sane replacements measurably improve PAR-2), the rest at
/// their baselines.
pub fn initial_suite() -> HeuristicSuite {
    let mut suite = HeuristicSuite::all_baseline();
    for slot in [
        Slot::RestartCondition,
        Slot::ReduceCondition,
        Slot::RephaseCondition,
    ] {
        let program = dsl::compile("return true;", slot).expect("degenerate condition compiles");
        suite.set_slot(slot, Strategy::Dsl(program));
    }
    suite
}

pub fn objective() -> BenchObjective {
    BenchObjective::new(micro_dataset(), SolverConfig::default(), TIMEOUT_S)
        .with_time_model(TimeModel::deterministic())
}

pub fn template() -> PromptTemplate {
    PromptTemplate::parse(crate::fixtures::ORIGINAL_PROMPT).expect("fixture template parses")
}

pub fn config() -> DiscoverConfig {
    DiscoverConfig {
        max_iter: 4,
        seed: 7,
        ..Default::default()
    }
}

fn wrap(slot: Slot, body: &str) -> String {
    format!("// start {slot}\n{}\n// end {slot}\n", body.trim())
}

/// The scripted generation outputs, in global request order (the scenario
/// shares one client between the coder and repairer roles):
///
/// 0. restart_condition — clean, adaptive replacement (improves).
/// 1. reduce_condition — broken (syntax error).
/// 2. repair of (1) — memory-aware replacement (improves).
/// 3. rephase_condition — clean, adaptive replacement (improves).
/// 4. var_bump_activity — baseline modulo comments (synonymous).
/// 5. var_bump_activity again — baseline modulo local names (synonymous).
pub fn scripted_outputs() -> Vec<String> {
    vec![
        wrap(
            Slot::RestartCondition,
            transcriptions::RESTART_CONDITION_LBD_ADAPTIVE,
        ),
        wrap(
            Slot::ReduceCondition,
            "if (learnts_size >= max_learnts) { return true;\nreturn false;",
        ),
        wrap(
            Slot::ReduceCondition,
            transcriptions::REDUCE_CONDITION_MEMORY_AWARE,
        ),
        wrap(
            Slot::RephaseCondition,
            transcriptions::REPHASE_CONDITION_PROGRESS_ADAPTIVE,
        ),
        wrap(
            Slot::VarBumpActivity,
            &format!(
                "// cosmetic variation\n{}",
                transcriptions::VAR_BUMP_BASELINE
            ),
        ),
        wrap(
            Slot::VarBumpActivity,
            &transcriptions::VAR_BUMP_BASELINE
                .replace("(u)", "(w)")
                .replace("(u,", "(w,"),
        ),
    ]
}

/// Runs the discovery scenario against any client (mock while recording,
/// replay in tests).
pub fn run(llm: &dyn LlmClient) -> Result<(DiscoverOutcome, usize), AutoError> {
    let mut objective = objective();
    let outcome = discover(
        &mut objective,
        &candidates(),
        initial_suite(),
        &template(),
        llm,
        llm,
        &config(),
    )?;
    Ok((outcome, objective.evaluations))
}

/// What the recorded run produced; asserted byte-for-byte on replay.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ExpectedOutcome {
    pub initial_par2: f64,
    pub par2: f64,
    pub suite_json: String,
    pub history: Vec<DiscoverStep>,
    pub evaluations: usize,
}

impl ExpectedOutcome {
    pub fn from_run(outcome: &DiscoverOutcome, evaluations: usize) -> ExpectedOutcome {
        ExpectedOutcome {
            initial_par2: outcome.initial_par2,
            par2: outcome.par2,
            suite_json: outcome.suite.to_json(),
            history: outcome.history.clone(),
            evaluations,
        }
    }
}

/// Shipped replay fixtures for the scenario.
pub const REPLAY_TRANSCRIPT: &str = include_str!("../fixtures/discover/replay.jsonl");
pub const EXPECTED_OUTCOME: &str = include_str!("../fixtures/discover/expected.json");
