//! A self-contained [`SolverView`] over a plain state snapshot.
//!
//! [`SnapshotView`] backs the hook fidelity tests: the same snapshot can be
//! handed to a native preset, a DSL program and a hand-written reference
//! transcription, and the resulting states, return values and effect logs
//! compared. Effects that would touch live solver structures are recorded in
//! an ordered log; the ones with an observable contract (`clear_lbd_queue`,
//! `cancel_until`, heap insertion) also apply a fixed state transition.

use crate::cnf::Var;
use crate::hooks::{ClauseId, SolverView};

/// Tiny deterministic generator (SplitMix64); stable across platforms.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn rand01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform in [lo, hi).
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.rand01() * (hi - lo)
    }
}

/// Recorded invocation of a view effect.
#[derive(Debug, Clone, PartialEq)]
pub enum Effect {
    CancelUntil(i64),
    ReduceDb,
    RebuildOrderHeap,
    ClearLbdQueue,
    HeapUpdate(u32),
    HeapInsert(u32),
    RescaleClaActivity(f64),
    ClampClaActivityMin(f64),
}

/// Plain data behind a [`SnapshotView`].
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotState {
    pub conflicts: i64,
    pub decisions: i64,
    pub lbd_queue_size: i64,
    pub fast_lbd_sum: f64,
    pub slow_lbd_sum: f64,
    pub trail_size: i64,
    pub decision_level: i64,
    pub num_clauses: i64,
    pub max_learnts: f64,
    pub garbage_frac: f64,
    pub wasted_bytes: i64,
    pub arena_bytes: i64,
    pub restart_first: i64,
    pub var_inc: f64,
    pub cla_inc: f64,
    pub conflict_r: i64,
    pub rephases: i64,
    pub rephase_count: i64,
    pub rephase_limit: i64,
    pub threshold: f64,
    pub last_rephase_progress: f64,
    pub last_restart_progress: f64,
    pub fast_avg: f64,
    pub slow_avg: f64,
    pub restart_count: i64,
    pub progress: f64,
    pub heap_top_activity: f64,
    pub activity: Vec<f64>,
    pub polarity: Vec<bool>,
    pub saved: Vec<bool>,
    pub local_best: Vec<bool>,
    pub user_pol: Vec<Option<bool>>,
    pub unassigned: Vec<bool>,
    pub in_heap: Vec<bool>,
    pub cla_activity: Vec<f64>,
}

impl SnapshotState {
    pub fn new(num_vars: usize, num_learnts: usize) -> SnapshotState {
        SnapshotState {
            conflicts: 0,
            decisions: 0,
            lbd_queue_size: 0,
            fast_lbd_sum: 0.0,
            slow_lbd_sum: 0.0,
            trail_size: 0,
            decision_level: 0,
            num_clauses: 1,
            max_learnts: 100.0,
            garbage_frac: 0.2,
            wasted_bytes: 0,
            arena_bytes: 1,
            restart_first: 100,
            var_inc: 1.0,
            cla_inc: 1.0,
            conflict_r: 0,
            rephases: 0,
            rephase_count: 0,
            rephase_limit: 1024,
            threshold: 0.0,
            last_rephase_progress: 0.0,
            last_restart_progress: 0.0,
            fast_avg: 0.0,
            slow_avg: 0.0,
            restart_count: 0,
            progress: 0.0,
            heap_top_activity: 0.0,
            activity: vec![0.0; num_vars],
            polarity: vec![false; num_vars],
            saved: vec![false; num_vars],
            local_best: vec![false; num_vars],
            user_pol: vec![None; num_vars],
            unassigned: vec![true; num_vars],
            in_heap: vec![true; num_vars],
            cla_activity: vec![0.0; num_learnts],
        }
    }

    /// A randomized snapshot exercising guard boundaries (zero counters,
    /// exactly-50 queue sizes, near-threshold activities, …).
    pub fn randomized(seed: u64) -> SnapshotState {
        let mut rng = SplitMix64::new(seed);
        let num_vars = 1 + rng.below(16) as usize;
        let num_learnts = rng.below(12) as usize;
        let mut s = SnapshotState::new(num_vars, num_learnts);

        s.conflicts = match rng.below(5) {
            0 => 0,
            1 => 1 + rng.below(50) as i64,
            2 => 800 + rng.below(400) as i64, // straddles the 1000 gate
            _ => rng.below(100_000) as i64,
        };
        s.decisions = rng.below(100_000) as i64;
        s.lbd_queue_size = match rng.below(5) {
            0 => 0,
            1 => 1 + rng.below(49) as i64,
            2 => 50,
            3 => 50 + rng.below(10) as i64, // straddles the >50 gate
            _ => 51 + rng.below(450) as i64,
        };
        s.fast_lbd_sum = rng.range_f64(0.0, 20.0) * s.lbd_queue_size.max(1) as f64;
        s.slow_lbd_sum = rng.range_f64(0.0, 20.0) * s.conflicts.max(1) as f64;
        s.trail_size = rng.below(num_vars as u64 + 1) as i64;
        s.decision_level = rng.below(s.trail_size as u64 + 1) as i64;
        s.num_clauses = 1 + rng.below(40) as i64;
        s.max_learnts = rng.range_f64(0.0, 30.0);
        s.garbage_frac = rng.range_f64(0.05, 0.95);
        s.arena_bytes = 1 + rng.below(100_000) as i64;
        s.wasted_bytes = rng.below(s.arena_bytes as u64 + 1) as i64;
        s.restart_first = [1, 100, 1000, 10_000][rng.below(4) as usize];
        s.var_inc = match rng.below(4) {
            0 => rng.range_f64(1e49, 1e51),
            _ => rng.range_f64(1e-3, 100.0),
        };
        s.cla_inc = match rng.below(4) {
            0 => rng.range_f64(1e19, 1e21),
            _ => rng.range_f64(1e-3, 100.0),
        };
        s.conflict_r = match rng.below(4) {
            0 => 0,
            1 => 800 + rng.below(400) as i64,
            _ => rng.below(20_000) as i64,
        };
        s.rephases = match rng.below(3) {
            0 => 0,
            _ => rng.below(20_000) as i64,
        };
        s.rephase_count = rng.below(100) as i64;
        s.rephase_limit = [512, 1024, 4096, 16_384, 20_000][rng.below(5) as usize];
        s.threshold = rng.range_f64(0.0, num_vars as f64);
        s.last_rephase_progress = match rng.below(3) {
            0 => 0.0,
            1 => rng.below(s.trail_size.max(1) as u64 + 1) as f64,
            _ => rng.below(20_000) as f64,
        };
        s.last_restart_progress = rng.range_f64(0.0, 1.0);
        s.fast_avg = match rng.below(3) {
            0 => 0.0,
            _ => rng.range_f64(0.1, 12.0),
        };
        s.slow_avg = match rng.below(3) {
            0 => 0.0,
            _ => rng.range_f64(0.1, 12.0),
        };
        s.restart_count = rng.below(64) as i64;
        s.progress = rng.rand01();
        for i in 0..num_vars {
            s.activity[i] = match rng.below(6) {
                0 => rng.range_f64(0.999e50, 1.01e50),
                1 => rng.range_f64(0.999e100, 1.01e100),
                2 => rng.range_f64(0.0, 1e-99),
                _ => rng.range_f64(0.0, 1e3),
            };
            s.polarity[i] = rng.below(2) == 0;
            s.saved[i] = rng.below(2) == 0;
            s.local_best[i] = rng.below(2) == 0;
            s.user_pol[i] = match rng.below(3) {
                0 => None,
                1 => Some(false),
                _ => Some(true),
            };
            s.unassigned[i] = rng.below(2) == 0;
            s.in_heap[i] = rng.below(2) == 0;
        }
        s.heap_top_activity = rng.range_f64(0.0, 1e3);
        for a in s.cla_activity.iter_mut() {
            *a = match rng.below(4) {
                0 => rng.range_f64(0.999e20, 1.01e20),
                1 => rng.range_f64(0.0, 1e-19),
                _ => rng.range_f64(0.0, 1e3),
            };
        }
        s
    }
}

/// A [`SolverView`] over a [`SnapshotState`] with an effect log.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotView {
    pub state: SnapshotState,
    pub effects: Vec<Effect>,
    scripted_rand: Vec<f64>,
    rng: SplitMix64,
}

impl SnapshotView {
    pub fn new(state: SnapshotState, rng_seed: u64) -> SnapshotView {
        SnapshotView {
            state,
            effects: Vec::new(),
            scripted_rand: Vec::new(),
            rng: SplitMix64::new(rng_seed),
        }
    }

    /// `rand01` serves `sequence` first (in order), then falls back to the
    /// seeded stream. Lets tests pin down probabilistic branches exactly.
    pub fn with_rand_sequence(state: SnapshotState, sequence: Vec<f64>) -> SnapshotView {
        let mut scripted_rand = sequence;
        scripted_rand.reverse();
        SnapshotView {
            state,
            effects: Vec::new(),
            scripted_rand,
            rng: SplitMix64::new(0),
        }
    }
}

impl SolverView for SnapshotView {
    fn conflicts(&self) -> i64 {
        self.state.conflicts
    }
    fn decisions(&self) -> i64 {
        self.state.decisions
    }
    fn lbd_queue_size(&self) -> i64 {
        self.state.lbd_queue_size
    }
    fn fast_lbd_sum(&self) -> f64 {
        self.state.fast_lbd_sum
    }
    fn slow_lbd_sum(&self) -> f64 {
        self.state.slow_lbd_sum
    }
    fn trail_size(&self) -> i64 {
        self.state.trail_size
    }
    fn decision_level(&self) -> i64 {
        self.state.decision_level
    }
    fn num_vars(&self) -> i64 {
        self.state.activity.len() as i64
    }
    fn num_clauses(&self) -> i64 {
        self.state.num_clauses
    }
    fn learnts_size(&self) -> i64 {
        self.state.cla_activity.len() as i64
    }
    fn max_learnts(&self) -> f64 {
        self.state.max_learnts
    }
    fn garbage_frac(&self) -> f64 {
        self.state.garbage_frac
    }
    fn wasted_bytes(&self) -> i64 {
        self.state.wasted_bytes
    }
    fn arena_bytes(&self) -> i64 {
        self.state.arena_bytes
    }
    fn restart_first(&self) -> i64 {
        self.state.restart_first
    }
    fn var_inc(&self) -> f64 {
        self.state.var_inc
    }
    fn cla_inc(&self) -> f64 {
        self.state.cla_inc
    }

    fn conflict_r(&self) -> i64 {
        self.state.conflict_r
    }
    fn set_conflict_r(&mut self, x: i64) {
        self.state.conflict_r = x;
    }
    fn rephases(&self) -> i64 {
        self.state.rephases
    }
    fn set_rephases(&mut self, x: i64) {
        self.state.rephases = x;
    }
    fn rephase_count(&self) -> i64 {
        self.state.rephase_count
    }
    fn set_rephase_count(&mut self, x: i64) {
        self.state.rephase_count = x;
    }
    fn rephase_limit(&self) -> i64 {
        self.state.rephase_limit
    }
    fn set_rephase_limit(&mut self, x: i64) {
        self.state.rephase_limit = x;
    }
    fn threshold(&self) -> f64 {
        self.state.threshold
    }
    fn set_threshold(&mut self, x: f64) {
        self.state.threshold = x;
    }
    fn last_rephase_progress(&self) -> f64 {
        self.state.last_rephase_progress
    }
    fn set_last_rephase_progress(&mut self, x: f64) {
        self.state.last_rephase_progress = x;
    }
    fn last_restart_progress(&self) -> f64 {
        self.state.last_restart_progress
    }
    fn set_last_restart_progress(&mut self, x: f64) {
        self.state.last_restart_progress = x;
    }
    fn fast_avg(&self) -> f64 {
        self.state.fast_avg
    }
    fn set_fast_avg(&mut self, x: f64) {
        self.state.fast_avg = x;
    }
    fn slow_avg(&self) -> f64 {
        self.state.slow_avg
    }
    fn set_slow_avg(&mut self, x: f64) {
        self.state.slow_avg = x;
    }
    fn restart_count(&self) -> i64 {
        self.state.restart_count
    }
    fn set_restart_count(&mut self, x: i64) {
        self.state.restart_count = x;
    }
    fn set_var_inc(&mut self, x: f64) {
        self.state.var_inc = x;
    }
    fn set_cla_inc(&mut self, x: f64) {
        self.state.cla_inc = x;
    }

    fn activity(&self, v: Var) -> f64 {
        self.state.activity[v.index()]
    }
    fn set_activity(&mut self, v: Var, x: f64) {
        self.state.activity[v.index()] = x;
    }
    fn polarity(&self, v: Var) -> bool {
        self.state.polarity[v.index()]
    }
    fn set_polarity(&mut self, v: Var, x: bool) {
        self.state.polarity[v.index()] = x;
    }
    fn saved(&self, v: Var) -> bool {
        self.state.saved[v.index()]
    }
    fn set_saved(&mut self, v: Var, x: bool) {
        self.state.saved[v.index()] = x;
    }
    fn local_best(&self, v: Var) -> bool {
        self.state.local_best[v.index()]
    }
    fn set_local_best(&mut self, v: Var, x: bool) {
        self.state.local_best[v.index()] = x;
    }
    fn user_pol(&self, v: Var) -> Option<bool> {
        self.state.user_pol[v.index()]
    }
    fn set_user_pol(&mut self, v: Var, x: Option<bool>) {
        self.state.user_pol[v.index()] = x;
    }
    fn is_unassigned(&self, v: Var) -> bool {
        self.state.unassigned[v.index()]
    }

    fn in_heap(&self, v: Var) -> bool {
        self.state.in_heap[v.index()]
    }
    fn heap_top_activity(&self) -> f64 {
        self.state.heap_top_activity
    }
    fn heap_update(&mut self, v: Var) {
        self.effects.push(Effect::HeapUpdate(v.0));
    }
    fn heap_insert(&mut self, v: Var) {
        self.effects.push(Effect::HeapInsert(v.0));
        self.state.in_heap[v.index()] = true;
    }

    fn cla_activity(&self, c: ClauseId) -> f64 {
        self.state.cla_activity[c.0 as usize]
    }
    fn set_cla_activity(&mut self, c: ClauseId, x: f64) {
        self.state.cla_activity[c.0 as usize] = x;
    }
    fn rescale_cla_activity(&mut self, factor: f64) {
        self.effects.push(Effect::RescaleClaActivity(factor));
        for a in self.state.cla_activity.iter_mut() {
            *a *= factor;
        }
    }
    fn clamp_cla_activity_min(&mut self, min: f64) {
        self.effects.push(Effect::ClampClaActivityMin(min));
        for a in self.state.cla_activity.iter_mut() {
            if *a < min {
                *a = min;
            }
        }
    }

    fn cancel_until(&mut self, level: i64) {
        self.effects.push(Effect::CancelUntil(level));
        if level < self.state.decision_level {
            self.state.decision_level = level.max(0);
        }
    }
    fn reduce_db(&mut self) {
        self.effects.push(Effect::ReduceDb);
    }
    fn rebuild_order_heap(&mut self) {
        self.effects.push(Effect::RebuildOrderHeap);
    }
    fn clear_lbd_queue(&mut self) {
        self.effects.push(Effect::ClearLbdQueue);
        self.state.lbd_queue_size = 0;
        self.state.fast_lbd_sum = 0.0;
    }
    fn progress_estimate(&self) -> f64 {
        self.state.progress
    }
    fn rand01(&mut self) -> f64 {
        self.scripted_rand
            .pop()
            .unwrap_or_else(|| self.rng.rand01())
    }
}
