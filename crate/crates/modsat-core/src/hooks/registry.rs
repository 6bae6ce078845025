//! Stable ids for the native strategy presets and dispatch by id.
//!
//! Ids have the shape `<slot>/<variant>` and are the unit of suite
//! serialization; DSL transcriptions of every preset live in
//! [`crate::dsl::transcriptions`] under the same ids.

use crate::cnf::Var;
use crate::hooks::{presets, ClauseId, Slot, SolverView};

/// `(id, slot)` for every native preset, baselines first.
pub const PRESETS: [(&str, Slot); 14] = [
    ("rephase_condition/baseline", Slot::RephaseCondition),
    ("rephase_function/baseline", Slot::RephaseFunction),
    ("reduce_condition/baseline", Slot::ReduceCondition),
    ("restart_condition/baseline", Slot::RestartCondition),
    ("restart_function/baseline", Slot::RestartFunction),
    ("var_bump_activity/baseline", Slot::VarBumpActivity),
    ("cla_bump_activity/baseline", Slot::ClaBumpActivity),
    (
        "rephase_condition/progress-adaptive",
        Slot::RephaseCondition,
    ),
    ("rephase_function/policy-weighted", Slot::RephaseFunction),
    ("reduce_condition/memory-aware", Slot::ReduceCondition),
    ("restart_condition/lbd-adaptive", Slot::RestartCondition),
    ("restart_function/lbd-moving-average", Slot::RestartFunction),
    ("var_bump_activity/level-scaled", Slot::VarBumpActivity),
    ("cla_bump_activity/floor-decay", Slot::ClaBumpActivity),
];

pub fn is_known(id: &str) -> bool {
    PRESETS.iter().any(|(known, _)| *known == id)
}

pub fn slot_of(id: &str) -> Option<Slot> {
    PRESETS
        .iter()
        .find(|(known, _)| *known == id)
        .map(|&(_, slot)| slot)
}

pub fn baseline_id(slot: Slot) -> &'static str {
    match slot {
        Slot::RephaseCondition => "rephase_condition/baseline",
        Slot::RephaseFunction => "rephase_function/baseline",
        Slot::ReduceCondition => "reduce_condition/baseline",
        Slot::RestartCondition => "restart_condition/baseline",
        Slot::RestartFunction => "restart_function/baseline",
        Slot::VarBumpActivity => "var_bump_activity/baseline",
        Slot::ClaBumpActivity => "cla_bump_activity/baseline",
    }
}

pub fn discovered_id(slot: Slot) -> &'static str {
    match slot {
        Slot::RephaseCondition => "rephase_condition/progress-adaptive",
        Slot::RephaseFunction => "rephase_function/policy-weighted",
        Slot::ReduceCondition => "reduce_condition/memory-aware",
        Slot::RestartCondition => "restart_condition/lbd-adaptive",
        Slot::RestartFunction => "restart_function/lbd-moving-average",
        Slot::VarBumpActivity => "var_bump_activity/level-scaled",
        Slot::ClaBumpActivity => "cla_bump_activity/floor-decay",
    }
}

/// Dispatches a condition-slot preset. Panics on a non-condition id; suite
/// loading guarantees ids are slot-consistent.
pub fn run_condition(id: &str, view: &mut dyn SolverView) -> bool {
    match id {
        "restart_condition/baseline" => presets::restart_condition_baseline(view),
        "restart_condition/lbd-adaptive" => presets::restart_condition_lbd_adaptive(view),
        "rephase_condition/baseline" => presets::rephase_condition_baseline(view),
        "rephase_condition/progress-adaptive" => presets::rephase_condition_progress_adaptive(view),
        "reduce_condition/baseline" => presets::reduce_condition_baseline(view),
        "reduce_condition/memory-aware" => presets::reduce_condition_memory_aware(view),
        other => panic!("`{other}` is not a condition preset"),
    }
}

pub fn run_function(id: &str, view: &mut dyn SolverView) {
    match id {
        "restart_function/baseline" => presets::restart_function_baseline(view),
        "restart_function/lbd-moving-average" => presets::restart_function_lbd_moving_average(view),
        "rephase_function/baseline" => presets::rephase_function_baseline(view),
        "rephase_function/policy-weighted" => presets::rephase_function_policy_weighted(view),
        other => panic!("`{other}` is not a function preset"),
    }
}

pub fn run_var_bump(id: &str, view: &mut dyn SolverView, v: Var, inc: f64) {
    match id {
        "var_bump_activity/baseline" => presets::var_bump_baseline(view, v, inc),
        "var_bump_activity/level-scaled" => presets::var_bump_level_scaled(view, v, inc),
        other => panic!("`{other}` is not a var-bump preset"),
    }
}

pub fn run_cla_bump(id: &str, view: &mut dyn SolverView, c: ClauseId) {
    match id {
        "cla_bump_activity/baseline" => presets::cla_bump_baseline(view, c),
        "cla_bump_activity/floor-decay" => presets::cla_bump_floor_decay(view, c),
        other => panic!("`{other}` is not a cla-bump preset"),
    }
}
