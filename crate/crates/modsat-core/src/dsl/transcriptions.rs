//! DSL sources for every native preset, keyed by registry id.
//!
//! Each source is a faithful transcription of the corresponding native
//! implementation; the fidelity tests run both against identical snapshots
//! and require matching outputs, states and effect sequences.

use crate::dsl::{compile, DslProgram};
use crate::hooks::registry;

pub const RESTART_CONDITION_BASELINE: &str = r#"
if (conflicts == 0) { return false; }
return lbd_queue_size == 50 && 0.8 * fast_lbd_sum / lbd_queue_size > slow_lbd_sum / conflicts;
"#;

pub const RESTART_CONDITION_LBD_ADAPTIVE: &str = r#"
if (conflicts <= 0) { return false; }
let restart_threshold = 0.0;
if (lbd_queue_size > 0) {
    let avg_lbd = fast_lbd_sum / lbd_queue_size;
    let conflict_rate = real(conflict_r) / real(conflicts);
    restart_threshold = restart_first * (0.8 + 0.4 * avg_lbd) * (1.0 + 0.5 * conflict_rate);
    if (progress_estimate() - last_rephase_progress < 0.01) {
        restart_threshold = restart_threshold * 0.7;
    }
} else {
    restart_threshold = real(restart_first);
}
if (conflict_r >= restart_threshold) {
    conflict_r = 0;
    return true;
}
return false;
"#;

pub const RESTART_FUNCTION_BASELINE: &str = r#"
clear_lbd_queue();
cancel_until(0);
"#;

pub const RESTART_FUNCTION_LBD_MOVING_AVERAGE: &str = r#"
if (lbd_queue_size > 0) {
    let curr_fast = fast_lbd_sum / lbd_queue_size;
    fast_avg = 0.9 * fast_avg + 0.1 * curr_fast;
    slow_avg = 0.99 * slow_avg + 0.01 * curr_fast;
}
let restart_level = 0;
if (fast_avg > 0.0 && slow_avg > 0.0) {
    let ratio = fast_avg / slow_avg;
    if (ratio > 1.2) {
        restart_level = 0;
    } else if (ratio > 1.0) {
        restart_level = max(0, decision_level / 2);
    } else {
        restart_level = max(0, decision_level - 1);
    }
}
clear_lbd_queue();
cancel_until(restart_level);
let old_count = restart_count;
restart_count = restart_count + 1;
if (old_count % 16 == 15) {
    reduce_db();
}
rebuild_order_heap();
"#;

pub const REPHASE_CONDITION_BASELINE: &str = r#"
return rephases >= rephase_limit;
"#;

pub const REPHASE_CONDITION_PROGRESS_ADAPTIVE: &str = r#"
if (conflict_r < rephase_limit) { return false; }
let progress = trunc(trail_size - last_rephase_progress);
let progress_threshold = max(50, trunc(num_vars * 0.02));
if (progress < progress_threshold) {
    rephase_limit = max(1024, rephase_limit * 2 / 3);
} else {
    rephase_limit = min(1024 * 16, rephase_limit * 3 / 2);
}
return true;
"#;

pub const REPHASE_FUNCTION_BASELINE: &str = r#"
conflict_r = 0;
rephases = 0;
threshold = threshold * 0.9;
rephase_limit = rephase_limit + 8192;
let phase_rand = trunc(rand01() * 100.0);
if (phase_rand < 40) {
    for_each_var(u) { set_polarity(u, local_best(u)); }
} else if (phase_rand < 65) {
    for_each_var(u) { set_polarity(u, !local_best(u)); }
} else if (phase_rand < 80) {
    for_each_var(u) { set_polarity(u, !polarity(u)); }
} else {
    for_each_var(u) { set_polarity(u, saved(u)); }
}
"#;

pub const REPHASE_FUNCTION_POLICY_WEIGHTED: &str = r#"
if (rephases > 0 && conflict_r > last_rephase_progress) {
    rephase_limit = trunc(rephase_limit * 1.5);
} else {
    rephase_limit = trunc(rephase_limit * 0.9);
    if (rephase_limit < 512) { rephase_limit = 512; }
}
last_rephase_progress = real(conflict_r);
rephase_count = rephase_count + 1;
let rand_val = rand01();
if (rand_val < 0.4) {
    for_each_var(u) { set_polarity(u, local_best(u)); }
} else if (rand_val < 0.7) {
    for_each_var(u) { set_polarity(u, !polarity(u)); }
} else if (rand_val < 0.9) {
    let activity_threshold = 0.2 * var_inc;
    for_each_var(u) {
        if (activity(u) < activity_threshold) {
            set_polarity(u, rand01() < 0.5);
        }
    }
} else {
    for_each_var(u) {
        if (user_pol_defined(u)) { set_polarity(u, user_pol(u)); }
    }
}
threshold = trail_size * 0.8;
cancel_until(0);
"#;

pub const REDUCE_CONDITION_BASELINE: &str = r#"
return learnts_size >= max_learnts;
"#;

pub const REDUCE_CONDITION_MEMORY_AWARE: &str = r#"
if (learnts_size >= max_learnts) { return true; }
if (wasted_bytes > arena_bytes * garbage_frac * 0.8) { return true; }
if (learnts_size > 0 && learnts_size > 2 * num_clauses) { return true; }
if (conflict_r > 1000 && learnts_size > max_learnts * 0.8) { return true; }
return false;
"#;

pub const VAR_BUMP_BASELINE: &str = r#"
set_activity(v, activity(v) + inc);
if (activity(v) > 1e50) {
    for_each_var(u) { set_activity(u, activity(u) * 1e-50); }
    var_inc = var_inc * 1e-50;
}
"#;

pub const VAR_BUMP_LEVEL_SCALED: &str = r#"
let scaled_inc = inc * (1.0 + 0.1 * decision_level);
set_activity(v, activity(v) + scaled_inc);
if (activity(v) > 1e100) {
    for_each_var(u) {
        set_activity(u, activity(u) * 1e-100);
        if (activity(u) < 1e-100) { set_activity(u, 1e-100); }
    }
    var_inc = var_inc * 1e-100;
}
if (in_heap(v)) {
    if (activity(v) > heap_top_activity()) {
        heap_update(v);
    }
} else if (is_unassigned(v)) {
    heap_insert(v);
}
"#;

pub const CLA_BUMP_BASELINE: &str = r#"
set_cla_activity(c, cla_activity(c) + cla_inc);
if (cla_activity(c) > 1e20) {
    rescale_cla_activity(1e-20);
    cla_inc = cla_inc * 1e-20;
}
"#;

pub const CLA_BUMP_FLOOR_DECAY: &str = r#"
set_cla_activity(c, cla_activity(c) + cla_inc);
if (cla_activity(c) > 1e20) {
    rescale_cla_activity(1e-20);
    clamp_cla_activity_min(1e-20);
    cla_inc = cla_inc * 1e-20;
    if (cla_inc < 1e-20) { cla_inc = 1e-20; }
}
if (conflicts > 1000 && lbd_queue_size > 50) {
    let conflict_scale = 1.0 - 0.01 * (lbd_queue_size / 50.0);
    cla_inc = cla_inc * max(conflict_scale, 0.8);
}
"#;

/// DSL source for a native preset id.
pub fn source_for(id: &str) -> Option<&'static str> {
    let src = match id {
        "restart_condition/baseline" => RESTART_CONDITION_BASELINE,
        "restart_condition/lbd-adaptive" => RESTART_CONDITION_LBD_ADAPTIVE,
        "restart_function/baseline" => RESTART_FUNCTION_BASELINE,
        "restart_function/lbd-moving-average" => RESTART_FUNCTION_LBD_MOVING_AVERAGE,
        "rephase_condition/baseline" => REPHASE_CONDITION_BASELINE,
        "rephase_condition/progress-adaptive" => REPHASE_CONDITION_PROGRESS_ADAPTIVE,
        "rephase_function/baseline" => REPHASE_FUNCTION_BASELINE,
        "rephase_function/policy-weighted" => REPHASE_FUNCTION_POLICY_WEIGHTED,
        "reduce_condition/baseline" => REDUCE_CONDITION_BASELINE,
        "reduce_condition/memory-aware" => REDUCE_CONDITION_MEMORY_AWARE,
        "var_bump_activity/baseline" => VAR_BUMP_BASELINE,
        "var_bump_activity/level-scaled" => VAR_BUMP_LEVEL_SCALED,
        "cla_bump_activity/baseline" => CLA_BUMP_BASELINE,
        "cla_bump_activity/floor-decay" => CLA_BUMP_FLOOR_DECAY,
        _ => return None,
    };
    Some(src)
}

/// Compiles the DSL transcription of a native preset.
pub fn program_for(id: &str) -> Option<DslProgram> {
    let source = source_for(id)?;
    let slot = registry::slot_of(id)?;
    Some(compile(source, slot).expect("shipped transcriptions always compile"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hooks::registry::PRESETS;

    #[test]
    fn every_preset_has_a_compiling_transcription() {
        for (id, slot) in PRESETS {
            let program =
                program_for(id).unwrap_or_else(|| panic!("missing transcription for {id}"));
            assert_eq!(program.slot, slot);
        }
    }
}
