//! Native implementations of the seven hook slots: the original baseline for
//! each slot plus its discovered variant.
//!
//! These are deliberately written as straight-line transcriptions against the
//! [`SolverView`] surface; integer expressions use truncating division and
//! int-from-float casts so the arithmetic matches the reference semantics
//! exactly.

use crate::cnf::Var;
use crate::hooks::{ClauseId, SolverView};

#[inline]
fn all_vars(n: i64) -> impl Iterator<Item = Var> {
    (0..n as u32).map(Var)
}

// ---------------------------------------------------------------------------
// restart_condition
// ---------------------------------------------------------------------------

/// Fires when exactly 50 recent LBDs have accumulated and their average
/// (scaled by 0.8) exceeds the global average LBD.
pub fn restart_condition_baseline(view: &mut dyn SolverView) -> bool {
    if view.conflicts() == 0 {
        return false;
    }
    view.lbd_queue_size() == 50
        && 0.8 * view.fast_lbd_sum() / view.lbd_queue_size() as f64
            > view.slow_lbd_sum() / view.conflicts() as f64
}

/// Adaptive threshold from average LBD and conflict rate, tightened by 0.7
/// when progress has stalled; resets the since-restart conflict counter when
/// it fires.
pub fn restart_condition_lbd_adaptive(view: &mut dyn SolverView) -> bool {
    if view.conflicts() <= 0 {
        return false;
    }
    let restart_threshold = if view.lbd_queue_size() > 0 {
        let avg_lbd = view.fast_lbd_sum() / view.lbd_queue_size() as f64;
        let conflict_rate = view.conflict_r() as f64 / view.conflicts() as f64;
        let mut t =
            view.restart_first() as f64 * (0.8 + 0.4 * avg_lbd) * (1.0 + 0.5 * conflict_rate);
        if view.progress_estimate() - view.last_rephase_progress() < 0.01 {
            t *= 0.7;
        }
        t
    } else {
        view.restart_first() as f64
    };
    if view.conflict_r() as f64 >= restart_threshold {
        view.set_conflict_r(0);
        return true;
    }
    false
}

// ---------------------------------------------------------------------------
// restart_function
// ---------------------------------------------------------------------------

/// Full restart: zero the recent-LBD statistics and backtrack to level 0.
pub fn restart_function_baseline(view: &mut dyn SolverView) {
    view.clear_lbd_queue();
    view.cancel_until(0);
}

/// Restart depth picked from fast/slow moving averages of the recent LBD
/// level; every 16th restart also reduces the clause database, and the order
/// heap is rebuilt afterwards.
pub fn restart_function_lbd_moving_average(view: &mut dyn SolverView) {
    if view.lbd_queue_size() > 0 {
        let curr_fast = view.fast_lbd_sum() / view.lbd_queue_size() as f64;
        view.set_fast_avg(0.9 * view.fast_avg() + 0.1 * curr_fast);
        view.set_slow_avg(0.99 * view.slow_avg() + 0.01 * curr_fast);
    }
    let mut restart_level: i64 = 0;
    if view.fast_avg() > 0.0 && view.slow_avg() > 0.0 {
        let ratio = view.fast_avg() / view.slow_avg();
        if ratio > 1.2 {
            restart_level = 0;
        } else if ratio > 1.0 {
            restart_level = (view.decision_level() / 2).max(0);
        } else {
            restart_level = (view.decision_level() - 1).max(0);
        }
    }
    view.clear_lbd_queue();
    view.cancel_until(restart_level);
    let old_count = view.restart_count();
    view.set_restart_count(old_count + 1);
    if old_count % 16 == 15 {
        view.reduce_db();
    }
    view.rebuild_order_heap();
}

// ---------------------------------------------------------------------------
// rephase_condition
// ---------------------------------------------------------------------------

pub fn rephase_condition_baseline(view: &mut dyn SolverView) -> bool {
    view.rephases() >= view.rephase_limit()
}

/// Interval-adaptive rephasing: once enough conflicts have passed, shrink the
/// next interval on stagnation (trail growth below 2% of the variables,
/// floored at 50) and stretch it on progress.
pub fn rephase_condition_progress_adaptive(view: &mut dyn SolverView) -> bool {
    const BASE_REPHASE_LIMIT: i64 = 1024;
    if view.conflict_r() < view.rephase_limit() {
        return false;
    }
    let progress = (view.trail_size() as f64 - view.last_rephase_progress()) as i64;
    let progress_threshold = 50.max((view.num_vars() as f64 * 0.02) as i64);
    if progress < progress_threshold {
        view.set_rephase_limit(BASE_REPHASE_LIMIT.max(view.rephase_limit() * 2 / 3));
    } else {
        view.set_rephase_limit((BASE_REPHASE_LIMIT * 16).min(view.rephase_limit() * 3 / 2));
    }
    true
}

// ---------------------------------------------------------------------------
// rephase_function
// ---------------------------------------------------------------------------

/// Original banded policy: 40% local-best phases, 25% inverted local-best,
/// 15% flip everything, otherwise restore saved phases.
pub fn rephase_function_baseline(view: &mut dyn SolverView) {
    view.set_conflict_r(0);
    view.set_rephases(0);
    view.set_threshold(view.threshold() * 0.9);
    view.set_rephase_limit(view.rephase_limit() + 8192);
    let phase_rand = (view.rand01() * 100.0) as i64;
    if phase_rand < 40 {
        for v in all_vars(view.num_vars()) {
            let b = view.local_best(v);
            view.set_polarity(v, b);
        }
    } else if phase_rand < 65 {
        for v in all_vars(view.num_vars()) {
            let b = view.local_best(v);
            view.set_polarity(v, !b);
        }
    } else if phase_rand < 80 {
        for v in all_vars(view.num_vars()) {
            let b = view.polarity(v);
            view.set_polarity(v, !b);
        }
    } else {
        for v in all_vars(view.num_vars()) {
            let b = view.saved(v);
            view.set_polarity(v, b);
        }
    }
}

/// Four weighted policies (local best / invert / randomize low-activity /
/// user phases) with a progress-scaled interval, then a full backtrack.
pub fn rephase_function_policy_weighted(view: &mut dyn SolverView) {
    if view.rephases() > 0 && view.conflict_r() as f64 > view.last_rephase_progress() {
        view.set_rephase_limit((view.rephase_limit() as f64 * 1.5) as i64);
    } else {
        view.set_rephase_limit((view.rephase_limit() as f64 * 0.9) as i64);
        if view.rephase_limit() < 512 {
            view.set_rephase_limit(512);
        }
    }
    view.set_last_rephase_progress(view.conflict_r() as f64);
    view.set_rephase_count(view.rephase_count() + 1);

    let rand_val = view.rand01();
    if rand_val < 0.4 {
        for v in all_vars(view.num_vars()) {
            let b = view.local_best(v);
            view.set_polarity(v, b);
        }
    } else if rand_val < 0.7 {
        for v in all_vars(view.num_vars()) {
            let b = view.polarity(v);
            view.set_polarity(v, !b);
        }
    } else if rand_val < 0.9 {
        let activity_threshold = 0.2 * view.var_inc();
        for v in all_vars(view.num_vars()) {
            if view.activity(v) < activity_threshold {
                let b = view.rand01() < 0.5;
                view.set_polarity(v, b);
            }
        }
    } else {
        for v in all_vars(view.num_vars()) {
            if let Some(b) = view.user_pol(v) {
                view.set_polarity(v, b);
            }
        }
    }
    view.set_threshold(view.trail_size() as f64 * 0.8);
    view.cancel_until(0);
}

// ---------------------------------------------------------------------------
// reduce_condition
// ---------------------------------------------------------------------------

pub fn reduce_condition_baseline(view: &mut dyn SolverView) -> bool {
    view.learnts_size() as f64 >= view.max_learnts()
}

/// Reduce on any of: the absolute learnt limit, memory pressure from wasted
/// arena bytes, a 2:1 learnt-to-original ratio, or a high-conflict phase with
/// the store at 80% of the limit.
pub fn reduce_condition_memory_aware(view: &mut dyn SolverView) -> bool {
    if view.learnts_size() as f64 >= view.max_learnts() {
        return true;
    }
    if view.wasted_bytes() as f64 > view.arena_bytes() as f64 * view.garbage_frac() * 0.8 {
        return true;
    }
    if view.learnts_size() > 0 && view.learnts_size() > 2 * view.num_clauses() {
        return true;
    }
    if view.conflict_r() > 1000 && view.learnts_size() as f64 > view.max_learnts() * 0.8 {
        return true;
    }
    false
}

// ---------------------------------------------------------------------------
// var_bump_activity
// ---------------------------------------------------------------------------

/// Plain additive bump with a 1e50 rescale threshold.
pub fn var_bump_baseline(view: &mut dyn SolverView, v: Var, inc: f64) {
    view.set_activity(v, view.activity(v) + inc);
    if view.activity(v) > 1e50 {
        for u in all_vars(view.num_vars()) {
            let a = view.activity(u);
            view.set_activity(u, a * 1e-50);
        }
        view.set_var_inc(view.var_inc() * 1e-50);
    }
}

/// Decision-level-scaled bump: a 1e100 rescale threshold with a 1e-100
/// per-variable floor, and heap maintenance only when it can matter.
pub fn var_bump_level_scaled(view: &mut dyn SolverView, v: Var, inc: f64) {
    let scaled_inc = inc * (1.0 + 0.1 * view.decision_level() as f64);
    view.set_activity(v, view.activity(v) + scaled_inc);
    if view.activity(v) > 1e100 {
        for u in all_vars(view.num_vars()) {
            let mut a = view.activity(u) * 1e-100;
            if a < 1e-100 {
                a = 1e-100;
            }
            view.set_activity(u, a);
        }
        view.set_var_inc(view.var_inc() * 1e-100);
    }
    if view.in_heap(v) {
        if view.activity(v) > view.heap_top_activity() {
            view.heap_update(v);
        }
    } else if view.is_unassigned(v) {
        view.heap_insert(v);
    }
}

// ---------------------------------------------------------------------------
// cla_bump_activity
// ---------------------------------------------------------------------------

pub fn cla_bump_baseline(view: &mut dyn SolverView, c: ClauseId) {
    view.set_cla_activity(c, view.cla_activity(c) + view.cla_inc());
    if view.cla_activity(c) > 1e20 {
        view.rescale_cla_activity(1e-20);
        view.set_cla_inc(view.cla_inc() * 1e-20);
    }
}

/// Rescale with a 1e-20 activity floor (for clauses and the increment), plus
/// a conflict-density decay of the increment during high-conflict phases.
pub fn cla_bump_floor_decay(view: &mut dyn SolverView, c: ClauseId) {
    view.set_cla_activity(c, view.cla_activity(c) + view.cla_inc());
    if view.cla_activity(c) > 1e20 {
        view.rescale_cla_activity(1e-20);
        view.clamp_cla_activity_min(1e-20);
        view.set_cla_inc(view.cla_inc() * 1e-20);
        if view.cla_inc() < 1e-20 {
            view.set_cla_inc(1e-20);
        }
    }
    if view.conflicts() > 1000 && view.lbd_queue_size() > 50 {
        let conflict_scale = 1.0 - 0.01 * (view.lbd_queue_size() as f64 / 50.0);
        let scale = if conflict_scale > 0.8 {
            conflict_scale
        } else {
            0.8
        };
        view.set_cla_inc(view.cla_inc() * scale);
    }
}
