//! The shared-context ("key code") document embedded at the end of every
//! generation prompt: the solver's member variables, the main-loop shape,
//! the slot's signature and capabilities, and its current implementation.

use modsat_core::dsl::check::{scalar_field_ty, writable_fields, SCALAR_FIELDS};
use modsat_core::dsl::transcriptions;
use modsat_core::hooks::{registry, Slot, Strategy};
use modsat_core::HeuristicSuite;

const MAIN_LOOP: &str = "\
// Solver main loop (fixed, not yours to modify):
//   loop {
//       propagate();
//       if conflict {
//           if decision_level == 0 { return UNSAT; }
//           analyze();            // calls var_bump_activity / cla_bump_activity
//           backtrack(); learn();
//           if restart_condition() { restart_function(); }
//           if rephase_condition() { rephase_function(); }
//           if reduce_condition()  { reduce_db(); }
//       } else {
//           if all assigned { return SAT; }
//           decide();             // picks max-activity var, phase from polarity
//       }
//   }";

fn signature(slot: Slot) -> &'static str {
    match slot {
        Slot::RestartCondition | Slot::RephaseCondition | Slot::ReduceCondition => {
            "takes no parameters and must return a bool on every path"
        }
        Slot::RestartFunction | Slot::RephaseFunction => "takes no parameters and returns nothing",
        Slot::VarBumpActivity => {
            "receives parameters `v` (the variable) and `inc` (real increment) and returns nothing"
        }
        Slot::ClaBumpActivity => "receives parameter `c` (the learnt clause) and returns nothing",
    }
}

fn callable(slot: Slot) -> &'static str {
    match slot {
        Slot::RestartCondition | Slot::RephaseCondition | Slot::ReduceCondition => {
            "progress_estimate(), rand01(), activity(v), polarity(v), saved(v), local_best(v), \
             user_pol(v), user_pol_defined(v), min, max, abs, floor, trunc, real, log, sqrt"
        }
        Slot::RestartFunction | Slot::RephaseFunction => {
            "cancel_until(level), reduce_db(), rebuild_order_heap(), clear_lbd_queue(), \
             progress_estimate(), rand01(), set_polarity(v, b), set_saved(v, b), \
             set_local_best(v, b), set_user_pol(v, b) [rephase_function only for the set_* calls], \
             activity(v), polarity(v), saved(v), local_best(v), user_pol(v), user_pol_defined(v), \
             min, max, abs, floor, trunc, real, log, sqrt"
        }
        Slot::VarBumpActivity => {
            "activity(v), set_activity(v, x), in_heap(v), heap_top_activity(), heap_update(v), \
             heap_insert(v), is_unassigned(v), rand01(), min, max, abs, floor, trunc, real, log, sqrt"
        }
        Slot::ClaBumpActivity => {
            "cla_activity(c), set_cla_activity(c, x), rescale_cla_activity(factor), \
             clamp_cla_activity_min(min), rand01(), min, max, abs, floor, trunc, real, log, sqrt"
        }
    }
}

/// Renders the key-code document for one slot given the suite currently in
/// the solver (its program for the slot is shown as the code to improve).
pub fn key_code(slot: Slot, suite: &HeuristicSuite) -> String {
    let mut fields = String::new();
    for (name, _) in SCALAR_FIELDS {
        let ty = scalar_field_ty(name).unwrap();
        fields.push_str(&format!("//   {ty} {name};\n"));
    }
    let writable = writable_fields(slot).join(", ");
    let current = match suite.slot(slot) {
        Strategy::Native(id) => transcriptions::source_for(id)
            .map(str::trim)
            .unwrap_or("// (no source available)")
            .to_string(),
        Strategy::Dsl(p) => p.source.trim().to_string(),
    };
    format!(
        "// Class member variables (shared information, read access everywhere):\n{fields}\
         //\n{MAIN_LOOP}\n//\n\
         // The {slot} function {sig}.\n\
         // Fields writable from this function: {writable}\n\
         // Callable functions here: {callable}\n\
         // Language: C-style statements only — let bindings, assignments, if/else,\n\
         // return, for_each_var(u) {{ ... }} loops, and the calls listed above.\n\
         // No new functions, no new global variables, no other loops.\n\
         //\n\
         // start {slot}\n{current}\n// end {slot}\n",
        sig = signature(slot),
        callable = callable(slot),
        writable = if writable.is_empty() {
            "(none)".to_string()
        } else {
            writable
        },
    )
}

/// Key code for the baseline suite; the common case for prompt optimization.
pub fn baseline_key_code(slot: Slot) -> String {
    key_code(slot, &HeuristicSuite::all_baseline())
}

/// Baseline program used as the synonym-gate reference when a slot holds a
/// native preset.
pub fn current_program(suite: &HeuristicSuite, slot: Slot) -> modsat_core::dsl::DslProgram {
    match suite.slot(slot) {
        Strategy::Dsl(p) => p.clone(),
        Strategy::Native(id) => transcriptions::program_for(id)
            .unwrap_or_else(|| transcriptions::program_for(registry::baseline_id(slot)).unwrap()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_code_embeds_current_source_between_markers() {
        let suite = HeuristicSuite::all_baseline();
        for slot in modsat_core::hooks::ALL_SLOTS {
            let doc = key_code(slot, &suite);
            assert!(doc.contains(&format!("// start {slot}")));
            assert!(doc.contains(&format!("// end {slot}")));
            assert!(doc.contains("conflicts;"));
            let body = modsat_core::dsl::extract_marked(&doc, slot).unwrap();
            modsat_core::dsl::compile(&body, slot).unwrap();
        }
    }
}
