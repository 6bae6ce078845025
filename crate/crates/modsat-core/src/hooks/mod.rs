//! The seven heuristic hook slots, the [`SolverView`] surface they operate
//! on, and the registry of native strategy presets.
//!
//! Every tunable decision the solver makes goes through one of the slots in
//! a [`HeuristicSuite`]. A slot is filled either with a native preset
//! (compiled in, identified by a stable registry id) or with an interpreted
//! [`DslProgram`]. Hooks never touch solver internals directly; the
//! [`SolverView`] trait is the sole capability they are handed.

pub mod presets;
pub mod registry;
pub mod snapshot;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::Var;
use crate::dsl::{self, DslProgram, RuntimeFault};

/// Handle to a learnt clause, meaningful only to the owning view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClauseId(pub u32);

/// The seven hook slots. The numeric indices follow the fixed candidate
/// numbering used by dataset manifests (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    RephaseCondition,
    RephaseFunction,
    ReduceCondition,
    RestartCondition,
    RestartFunction,
    VarBumpActivity,
    ClaBumpActivity,
}

pub const ALL_SLOTS: [Slot; 7] = [
    Slot::RephaseCondition,
    Slot::RephaseFunction,
    Slot::ReduceCondition,
    Slot::RestartCondition,
    Slot::RestartFunction,
    Slot::VarBumpActivity,
    Slot::ClaBumpActivity,
];

impl Slot {
    /// 1-based index used in dataset manifests and reports.
    pub fn index(self) -> u8 {
        match self {
            Slot::RephaseCondition => 1,
            Slot::RephaseFunction => 2,
            Slot::ReduceCondition => 3,
            Slot::RestartCondition => 4,
            Slot::RestartFunction => 5,
            Slot::VarBumpActivity => 6,
            Slot::ClaBumpActivity => 7,
        }
    }

    pub fn from_index(index: u8) -> Option<Slot> {
        ALL_SLOTS.iter().copied().find(|s| s.index() == index)
    }

    pub fn name(self) -> &'static str {
        match self {
            Slot::RephaseCondition => "rephase_condition",
            Slot::RephaseFunction => "rephase_function",
            Slot::ReduceCondition => "reduce_condition",
            Slot::RestartCondition => "restart_condition",
            Slot::RestartFunction => "restart_function",
            Slot::VarBumpActivity => "var_bump_activity",
            Slot::ClaBumpActivity => "cla_bump_activity",
        }
    }

    pub fn from_name(name: &str) -> Option<Slot> {
        ALL_SLOTS.iter().copied().find(|s| s.name() == name)
    }

    /// Condition slots return a boolean; the others return nothing.
    pub fn returns_bool(self) -> bool {
        matches!(
            self,
            Slot::RephaseCondition | Slot::ReduceCondition | Slot::RestartCondition
        )
    }
}

impl std::fmt::Display for Slot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The read/write surface a hook sees. Integer-valued statistics are exposed
/// as `i64` (matching the DSL's integer type); reals as `f64`.
pub trait SolverView {
    // Read-only statistics.
    fn conflicts(&self) -> i64;
    fn decisions(&self) -> i64;
    fn lbd_queue_size(&self) -> i64;
    fn fast_lbd_sum(&self) -> f64;
    fn slow_lbd_sum(&self) -> f64;
    fn trail_size(&self) -> i64;
    fn decision_level(&self) -> i64;
    fn num_vars(&self) -> i64;
    /// Number of original (problem) clauses, learnts excluded.
    fn num_clauses(&self) -> i64;
    fn learnts_size(&self) -> i64;
    fn max_learnts(&self) -> f64;
    fn garbage_frac(&self) -> f64;
    fn wasted_bytes(&self) -> i64;
    fn arena_bytes(&self) -> i64;
    fn restart_first(&self) -> i64;
    fn var_inc(&self) -> f64;
    fn cla_inc(&self) -> f64;

    // Heuristic state, readable and writable from the designated slots.
    fn conflict_r(&self) -> i64;
    fn set_conflict_r(&mut self, x: i64);
    fn rephases(&self) -> i64;
    fn set_rephases(&mut self, x: i64);
    fn rephase_count(&self) -> i64;
    fn set_rephase_count(&mut self, x: i64);
    fn rephase_limit(&self) -> i64;
    fn set_rephase_limit(&mut self, x: i64);
    fn threshold(&self) -> f64;
    fn set_threshold(&mut self, x: f64);
    fn last_rephase_progress(&self) -> f64;
    fn set_last_rephase_progress(&mut self, x: f64);
    fn last_restart_progress(&self) -> f64;
    fn set_last_restart_progress(&mut self, x: f64);
    fn fast_avg(&self) -> f64;
    fn set_fast_avg(&mut self, x: f64);
    fn slow_avg(&self) -> f64;
    fn set_slow_avg(&mut self, x: f64);
    fn restart_count(&self) -> i64;
    fn set_restart_count(&mut self, x: i64);
    fn set_var_inc(&mut self, x: f64);
    fn set_cla_inc(&mut self, x: f64);

    // Per-variable state.
    fn activity(&self, v: Var) -> f64;
    fn set_activity(&mut self, v: Var, x: f64);
    fn polarity(&self, v: Var) -> bool;
    fn set_polarity(&mut self, v: Var, x: bool);
    fn saved(&self, v: Var) -> bool;
    fn set_saved(&mut self, v: Var, x: bool);
    fn local_best(&self, v: Var) -> bool;
    fn set_local_best(&mut self, v: Var, x: bool);
    fn user_pol(&self, v: Var) -> Option<bool>;
    fn set_user_pol(&mut self, v: Var, x: Option<bool>);
    fn is_unassigned(&self, v: Var) -> bool;

    // Order-heap interaction.
    fn in_heap(&self, v: Var) -> bool;
    /// Activity of the heap root; 0.0 when the heap is empty.
    fn heap_top_activity(&self) -> f64;
    /// Restores `v`'s heap position after an activity increase. No-op when
    /// `v` is not in the heap.
    fn heap_update(&mut self, v: Var);
    /// Inserts `v` into the heap if absent.
    fn heap_insert(&mut self, v: Var);

    // Learnt-clause activities.
    fn cla_activity(&self, c: ClauseId) -> f64;
    fn set_cla_activity(&mut self, c: ClauseId, x: f64);
    /// Multiplies every learnt clause's activity by `factor`.
    fn rescale_cla_activity(&mut self, factor: f64);
    /// Raises every learnt clause's activity to at least `min`.
    fn clamp_cla_activity_min(&mut self, min: f64);

    // Callable effects.
    fn cancel_until(&mut self, level: i64);
    fn reduce_db(&mut self);
    fn rebuild_order_heap(&mut self);
    /// Zeroes the recent-LBD queue (contents, size, cursor and fast sum).
    fn clear_lbd_queue(&mut self);
    fn progress_estimate(&self) -> f64;
    fn rand01(&mut self) -> f64;
}

/// A strategy filling one hook slot.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// A compiled-in preset, identified by its registry id.
    Native(String),
    /// An interpreted program in the heuristic DSL.
    Dsl(DslProgram),
}

impl Strategy {
    pub fn native(id: &str) -> Strategy {
        Strategy::Native(id.to_string())
    }

    pub fn describe(&self) -> String {
        match self {
            Strategy::Native(id) => id.clone(),
            Strategy::Dsl(p) => format!("dsl:{}", p.slot.name()),
        }
    }
}

/// A fault raised by a DSL strategy while the solver was running.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("hook fault in slot {slot}: {fault}")]
pub struct HookFault {
    pub slot: Slot,
    pub fault: RuntimeFault,
}

/// One strategy per hook slot.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicSuite {
    pub rephase_condition: Strategy,
    pub rephase_function: Strategy,
    pub reduce_condition: Strategy,
    pub restart_condition: Strategy,
    pub restart_function: Strategy,
    pub var_bump_activity: Strategy,
    pub cla_bump_activity: Strategy,
}

impl HeuristicSuite {
    /// Suite with every slot at its original implementation.
    pub fn all_baseline() -> HeuristicSuite {
        HeuristicSuite::from_fn(|slot| Strategy::native(registry::baseline_id(slot)))
    }

    /// Suite with every slot at its discovered variant.
    pub fn all_discovered() -> HeuristicSuite {
        HeuristicSuite::from_fn(|slot| Strategy::native(registry::discovered_id(slot)))
    }

    pub fn from_fn(mut f: impl FnMut(Slot) -> Strategy) -> HeuristicSuite {
        HeuristicSuite {
            rephase_condition: f(Slot::RephaseCondition),
            rephase_function: f(Slot::RephaseFunction),
            reduce_condition: f(Slot::ReduceCondition),
            restart_condition: f(Slot::RestartCondition),
            restart_function: f(Slot::RestartFunction),
            var_bump_activity: f(Slot::VarBumpActivity),
            cla_bump_activity: f(Slot::ClaBumpActivity),
        }
    }

    pub fn slot(&self, slot: Slot) -> &Strategy {
        match slot {
            Slot::RephaseCondition => &self.rephase_condition,
            Slot::RephaseFunction => &self.rephase_function,
            Slot::ReduceCondition => &self.reduce_condition,
            Slot::RestartCondition => &self.restart_condition,
            Slot::RestartFunction => &self.restart_function,
            Slot::VarBumpActivity => &self.var_bump_activity,
            Slot::ClaBumpActivity => &self.cla_bump_activity,
        }
    }

    pub fn set_slot(&mut self, slot: Slot, strategy: Strategy) {
        match slot {
            Slot::RephaseCondition => self.rephase_condition = strategy,
            Slot::RephaseFunction => self.rephase_function = strategy,
            Slot::ReduceCondition => self.reduce_condition = strategy,
            Slot::RestartCondition => self.restart_condition = strategy,
            Slot::RestartFunction => self.restart_function = strategy,
            Slot::VarBumpActivity => self.var_bump_activity = strategy,
            Slot::ClaBumpActivity => self.cla_bump_activity = strategy,
        }
    }

    pub fn with_slot(&self, slot: Slot, strategy: Strategy) -> HeuristicSuite {
        let mut out = self.clone();
        out.set_slot(slot, strategy);
        out
    }

    // Slot runners. Native presets cannot fault; DSL strategies can.

    pub fn run_restart_condition(&self, view: &mut dyn SolverView) -> Result<bool, HookFault> {
        self.run_condition(Slot::RestartCondition, view)
    }

    pub fn run_rephase_condition(&self, view: &mut dyn SolverView) -> Result<bool, HookFault> {
        self.run_condition(Slot::RephaseCondition, view)
    }

    pub fn run_reduce_condition(&self, view: &mut dyn SolverView) -> Result<bool, HookFault> {
        self.run_condition(Slot::ReduceCondition, view)
    }

    fn run_condition(&self, slot: Slot, view: &mut dyn SolverView) -> Result<bool, HookFault> {
        match self.slot(slot) {
            Strategy::Native(id) => Ok(registry::run_condition(id, view)),
            Strategy::Dsl(p) => {
                dsl::interpret_condition(p, view).map_err(|fault| HookFault { slot, fault })
            }
        }
    }

    pub fn run_restart_function(&self, view: &mut dyn SolverView) -> Result<(), HookFault> {
        self.run_function(Slot::RestartFunction, view)
    }

    pub fn run_rephase_function(&self, view: &mut dyn SolverView) -> Result<(), HookFault> {
        self.run_function(Slot::RephaseFunction, view)
    }

    fn run_function(&self, slot: Slot, view: &mut dyn SolverView) -> Result<(), HookFault> {
        match self.slot(slot) {
            Strategy::Native(id) => {
                registry::run_function(id, view);
                Ok(())
            }
            Strategy::Dsl(p) => {
                dsl::interpret_function(p, view).map_err(|fault| HookFault { slot, fault })
            }
        }
    }

    pub fn run_var_bump(
        &self,
        view: &mut dyn SolverView,
        v: Var,
        inc: f64,
    ) -> Result<(), HookFault> {
        match &self.var_bump_activity {
            Strategy::Native(id) => {
                registry::run_var_bump(id, view, v, inc);
                Ok(())
            }
            Strategy::Dsl(p) => {
                dsl::interpret_var_bump(p, view, v, inc).map_err(|fault| HookFault {
                    slot: Slot::VarBumpActivity,
                    fault,
                })
            }
        }
    }

    pub fn run_cla_bump(&self, view: &mut dyn SolverView, c: ClauseId) -> Result<(), HookFault> {
        match &self.cla_bump_activity {
            Strategy::Native(id) => {
                registry::run_cla_bump(id, view, c);
                Ok(())
            }
            Strategy::Dsl(p) => dsl::interpret_cla_bump(p, view, c).map_err(|fault| HookFault {
                slot: Slot::ClaBumpActivity,
                fault,
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Suite serialization: a structured document with one entry per slot,
// {kind: native|dsl, id or source}. This file format is the unit the search
// layer persists and mutates.
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct SuiteDoc {
    schema: u32,
    slots: Vec<SlotDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SlotDoc {
    slot: String,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

/// Errors raised when loading a serialized suite.
#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("bad suite document: {0}")]
    Document(String),
    #[error("unknown slot `{0}`")]
    UnknownSlot(String),
    #[error("unknown native preset `{0}`")]
    UnknownPreset(String),
    #[error("slot {0} filled more than once")]
    DuplicateSlot(Slot),
    #[error("slot {0} missing")]
    MissingSlot(Slot),
    #[error("dsl program for slot {slot} rejected: {diagnostics}")]
    BadProgram { slot: Slot, diagnostics: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HeuristicSuite {
    pub fn to_json(&self) -> String {
        let slots = ALL_SLOTS
            .iter()
            .map(|&slot| match self.slot(slot) {
                Strategy::Native(id) => SlotDoc {
                    slot: slot.name().to_string(),
                    kind: "native".into(),
                    id: Some(id.clone()),
                    source: None,
                },
                Strategy::Dsl(p) => SlotDoc {
                    slot: slot.name().to_string(),
                    kind: "dsl".into(),
                    id: None,
                    source: Some(p.source.clone()),
                },
            })
            .collect();
        let doc = SuiteDoc { schema: 1, slots };
        serde_json::to_string_pretty(&doc).expect("suite serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<HeuristicSuite, SuiteError> {
        let doc: SuiteDoc = serde_json::from_str(text)?;
        if doc.schema != 1 {
            return Err(SuiteError::Document(format!(
                "unsupported schema {}",
                doc.schema
            )));
        }
        let mut slots: [Option<Strategy>; 7] = Default::default();
        for entry in &doc.slots {
            let slot = Slot::from_name(&entry.slot)
                .ok_or_else(|| SuiteError::UnknownSlot(entry.slot.clone()))?;
            let idx = (slot.index() - 1) as usize;
            if slots[idx].is_some() {
                return Err(SuiteError::DuplicateSlot(slot));
            }
            let strategy =
                match entry.kind.as_str() {
                    "native" => {
                        let id = entry.id.as_deref().ok_or_else(|| {
                            SuiteError::Document("native entry without id".into())
                        })?;
                        if !registry::is_known(id) {
                            return Err(SuiteError::UnknownPreset(id.to_string()));
                        }
                        Strategy::Native(id.to_string())
                    }
                    "dsl" => {
                        let source = entry.source.as_deref().ok_or_else(|| {
                            SuiteError::Document("dsl entry without source".into())
                        })?;
                        let program =
                            dsl::compile(source, slot).map_err(|diags| SuiteError::BadProgram {
                                slot,
                                diagnostics: diags
                                    .iter()
                                    .map(|d| d.to_string())
                                    .collect::<Vec<_>>()
                                    .join("; "),
                            })?;
                        Strategy::Dsl(program)
                    }
                    other => {
                        return Err(SuiteError::Document(format!("unknown kind `{other}`")));
                    }
                };
            slots[idx] = Some(strategy);
        }
        let mut take = |slot: Slot| -> Result<Strategy, SuiteError> {
            slots[(slot.index() - 1) as usize]
                .take()
                .ok_or(SuiteError::MissingSlot(slot))
        };
        Ok(HeuristicSuite {
            rephase_condition: take(Slot::RephaseCondition)?,
            rephase_function: take(Slot::RephaseFunction)?,
            reduce_condition: take(Slot::ReduceCondition)?,
            restart_condition: take(Slot::RestartCondition)?,
            restart_function: take(Slot::RestartFunction)?,
            var_bump_activity: take(Slot::VarBumpActivity)?,
            cla_bump_activity: take(Slot::ClaBumpActivity)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_indices_follow_manifest_numbering() {
        assert_eq!(Slot::RephaseCondition.index(), 1);
        assert_eq!(Slot::RephaseFunction.index(), 2);
        assert_eq!(Slot::ReduceCondition.index(), 3);
        assert_eq!(Slot::RestartCondition.index(), 4);
        assert_eq!(Slot::RestartFunction.index(), 5);
        assert_eq!(Slot::VarBumpActivity.index(), 6);
        assert_eq!(Slot::ClaBumpActivity.index(), 7);
        for slot in ALL_SLOTS {
            assert_eq!(Slot::from_index(slot.index()), Some(slot));
            assert_eq!(Slot::from_name(slot.name()), Some(slot));
        }
    }

    #[test]
    fn suite_round_trips_through_json() {
        let suite = HeuristicSuite::all_baseline();
        let json = suite.to_json();
        let back = HeuristicSuite::from_json(&json).unwrap();
        assert_eq!(suite, back);

        let mixed = suite.with_slot(
            Slot::RestartCondition,
            Strategy::native(registry::discovered_id(Slot::RestartCondition)),
        );
        let back = HeuristicSuite::from_json(&mixed.to_json()).unwrap();
        assert_eq!(mixed, back);
    }

    #[test]
    fn suite_rejects_unknown_preset() {
        let json = r#"{"schema":1,"slots":[{"slot":"restart_condition","kind":"native","id":"restart_condition/nope"}]}"#;
        assert!(matches!(
            HeuristicSuite::from_json(json),
            Err(SuiteError::UnknownPreset(_))
        ));
    }
}
