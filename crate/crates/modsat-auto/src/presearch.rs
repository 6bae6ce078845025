//! Phase 1 of the two-phase search: screen each hook slot on a compact
//! half-size subset and keep the four best-scoring slots.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use modsat_core::hooks::{Slot, ALL_SLOTS};
use modsat_core::HeuristicSuite;

use crate::objective::SuiteObjective;
use crate::AutoError;

pub const RETAINED_COUNT: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct PresearchOutcome {
    /// Slots retained for the evolutionary phase, in ascending slot order.
    pub retained: Vec<u8>,
    /// Every slot with its compact-subset PAR-2, in evaluation order.
    pub scores: Vec<(u8, f64)>,
    /// Indices of the compact subset used for screening.
    pub compact: Vec<usize>,
}

impl PresearchOutcome {
    pub fn retained_slots(&self) -> Vec<Slot> {
        self.retained
            .iter()
            .filter_map(|&i| Slot::from_index(i))
            .collect()
    }
}

/// The compact subset: every other instance of a seeded shuffle, so
/// `ceil(N/2)` instances.
pub fn compact_subset(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut picked: Vec<usize> = order.into_iter().step_by(2).collect();
    picked.sort_unstable();
    picked
}

/// Evaluates, for each of the seven slots, the full suite with that slot
/// swapped to its baseline, and retains the four slots with the lowest
/// PAR-2 (ties resolved toward the lower slot index).
pub fn presearch(
    objective: &mut dyn SuiteObjective,
    baselines: &HeuristicSuite,
    full_suite: &HeuristicSuite,
    seed: u64,
) -> Result<PresearchOutcome, AutoError> {
    let n = objective.len();
    if n < 2 {
        return Err(AutoError::BadParams(
            "presearch needs at least 2 instances".into(),
        ));
    }
    let compact = compact_subset(n, seed);
    let mut scores: Vec<(u8, f64)> = Vec::with_capacity(ALL_SLOTS.len());
    for slot in ALL_SLOTS {
        let probe = full_suite.with_slot(slot, baselines.slot(slot).clone());
        let score = objective.evaluate(&probe, &compact)?;
        scores.push((slot.index(), score));
    }
    let mut ranked = scores.clone();
    ranked.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    let mut retained: Vec<u8> = ranked
        .iter()
        .take(RETAINED_COUNT)
        .map(|&(i, _)| i)
        .collect();
    retained.sort_unstable();
    Ok(PresearchOutcome {
        retained,
        scores,
        compact,
    })
}
