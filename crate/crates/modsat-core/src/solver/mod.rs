//! The CDCL engine: two-watched-literal propagation, first-UIP learning,
//! activity-ordered decisions, and the three condition-gated maintenance
//! steps (restart, rephase, reduce) evaluated after each conflict. All seven
//! heuristic decisions are delegated to the [`HeuristicSuite`]; the engine
//! itself implements only the sound machinery around them.

mod heap;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Formula, Lit, Var};
use crate::hooks::{ClauseId, HeuristicSuite, HookFault, SolverView};
use heap::VarOrderHeap;

const LBD_QUEUE_CAP: usize = 500;

/// Tunable solver parameters. Ranges follow the configuration table the
/// random tuner samples from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Variable activity decay factor, in (0, 1).
    pub var_decay: f64,
    /// Clause activity decay factor, in (0, 1).
    pub cla_decay: f64,
    /// Frequency of random variable selection, in [0, 1].
    pub rnd_freq: f64,
    /// Randomize initial activities.
    pub rnd_init: bool,
    /// Base restart interval, in [1, 1e4]; exposed to hooks as `restart_first`.
    pub rfirst: u32,
    /// Restart interval increase factor, in (1.5, 4). Accepted for tuner
    /// compatibility; none of the shipped heuristics read it.
    pub rinc: f64,
    /// Wasted-memory fraction that triggers garbage collection, in (0, 1).
    pub gc_frac: f64,
    /// Minimum learnt clause limit, in [0, 1e6].
    pub min_learnts: u32,
    /// Enable recursive learnt-clause minimization.
    pub ccmin: bool,
    /// RNG seed; 0 selects a fixed default stream.
    pub seed: u64,
    /// Wall-clock limit in seconds.
    pub timeout_s: Option<f64>,
    /// Deterministic budget: maximum propagation count.
    pub tick_limit: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            var_decay: 0.95,
            cla_decay: 0.999,
            rnd_freq: 0.0,
            rnd_init: false,
            rfirst: 100,
            rinc: 2.0,
            gc_frac: 0.20,
            min_learnts: 0,
            ccmin: false,
            seed: 0,
            timeout_s: None,
            tick_limit: None,
        }
    }
}

/// Configuration field out of range.
#[derive(Debug, Error, PartialEq)]
#[error("solver config: {field} = {value} outside {range}")]
pub struct ConfigError {
    pub field: &'static str,
    pub value: String,
    pub range: &'static str,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |field, value: String, range| {
            Err(ConfigError {
                field,
                value,
                range,
            })
        };
        if !(self.var_decay > 0.0 && self.var_decay < 1.0) {
            return err("var_decay", self.var_decay.to_string(), "(0, 1)");
        }
        if !(self.cla_decay > 0.0 && self.cla_decay < 1.0) {
            return err("cla_decay", self.cla_decay.to_string(), "(0, 1)");
        }
        if !(0.0..=1.0).contains(&self.rnd_freq) {
            return err("rnd_freq", self.rnd_freq.to_string(), "[0, 1]");
        }
        if !(1..=10_000).contains(&self.rfirst) {
            return err("rfirst", self.rfirst.to_string(), "[1, 1e4]");
        }
        if !(self.rinc > 1.5 && self.rinc < 4.0) {
            return err("rinc", self.rinc.to_string(), "(1.5, 4)");
        }
        if !(self.gc_frac > 0.0 && self.gc_frac < 1.0) {
            return err("gc_frac", self.gc_frac.to_string(), "(0, 1)");
        }
        if self.min_learnts > 1_000_000 {
            return err("min_learnts", self.min_learnts.to_string(), "[0, 1e6]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Unknown,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolveStatus::Sat => "SATISFIABLE",
            SolveStatus::Unsat => "UNSATISFIABLE",
            SolveStatus::Unknown => "UNKNOWN",
        };
        f.write_str(s)
    }
}

/// Counter snapshot reported with every result.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub rephase_events: u64,
    pub reduce_events: u64,
    pub learnt_clauses: u64,
    pub gc_events: u64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub model: Option<Assignment>,
    pub stats: Stats,
    pub wall_time: f64,
}

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    activity: f64,
    lbd: u32,
    learnt: bool,
    dead: bool,
}

fn clause_bytes(len: usize) -> usize {
    16 + 4 * len
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: Lit,
}

/// A solver instance over one formula. Strictly single-threaded; build one
/// per concurrent job.
pub struct Solver {
    num_vars: usize,
    cfg: SolverConfig,

    arena: Vec<ClauseData>,
    arena_bytes: usize,
    wasted_bytes: usize,
    original: Vec<u32>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,

    assigns: Vec<Option<bool>>,
    var_level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,

    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarOrderHeap,

    polarity: Vec<bool>,
    saved: Vec<bool>,
    local_best: Vec<bool>,
    user_pol: Vec<Option<bool>>,

    max_learnts: f64,

    lbd_queue: [u32; LBD_QUEUE_CAP],
    lbd_queue_size: usize,
    lbd_queue_pos: usize,
    fast_lbd_sum: f64,
    slow_lbd_sum: f64,

    conflict_r: i64,
    rephases: i64,
    rephase_count: i64,
    rephase_limit: i64,
    threshold: f64,
    last_rephase_progress: f64,
    last_restart_progress: f64,
    fast_avg: f64,
    slow_avg: f64,
    restart_count: i64,

    rng_state: f64,
    stats: Stats,
    ok: bool,

    seen: Vec<bool>,
    analyze_toclear: Vec<Var>,
}

impl Solver {
    pub fn new(formula: &Formula, cfg: SolverConfig) -> Solver {
        let n = formula.num_vars;
        let mut solver = Solver {
            num_vars: n,
            arena: Vec::new(),
            arena_bytes: 0,
            wasted_bytes: 0,
            original: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![None; n],
            var_level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarOrderHeap::new(n),
            polarity: vec![false; n],
            saved: vec![false; n],
            local_best: vec![false; n],
            user_pol: vec![None; n],
            max_learnts: 0.0,
            lbd_queue: [0; LBD_QUEUE_CAP],
            lbd_queue_size: 0,
            lbd_queue_pos: 0,
            fast_lbd_sum: 0.0,
            slow_lbd_sum: 0.0,
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
            rng_state: if cfg.seed == 0 {
                91_648_253.0
            } else {
                (cfg.seed % 2_147_483_646) as f64 + 1.0
            },
            stats: Stats::default(),
            ok: true,
            seen: vec![false; n],
            analyze_toclear: Vec::new(),
            cfg,
        };

        if solver.cfg.rnd_init {
            for v in 0..n {
                solver.activity[v] = solver.drand() * 0.000_01;
            }
        }
        solver
            .heap
            .rebuild((0..n as u32).map(Var), &solver.activity);

        for clause in &formula.clauses {
            if !solver.ok {
                break;
            }
            solver.add_original_clause(clause);
        }
        solver.max_learnts =
            (formula.clauses.len() as f64 / 3.0).max(solver.cfg.min_learnts as f64);
        solver
    }

    fn add_original_clause(&mut self, lits: &[Lit]) {
        for l in lits {
            assert!(
                l.var().index() < self.num_vars,
                "literal {l} exceeds the declared variable count {}",
                self.num_vars
            );
        }
        // Inputs built through Formula::add_clause are already normalized;
        // re-normalize anyway so hand-built formulas stay sound.
        let mut lits = lits.to_vec();
        lits.sort_unstable();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return; // tautology
            }
        }
        match lits.len() {
            0 => self.ok = false,
            1 => match self.value(lits[0]) {
                Some(true) => {}
                Some(false) => self.ok = false,
                None => self.enqueue(lits[0], None),
            },
            _ => {
                let cid = self.alloc_clause(lits, false);
                self.original.push(cid);
                self.attach_clause(cid);
            }
        }
    }

    fn alloc_clause(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let bytes = clause_bytes(lits.len());
        self.arena.push(ClauseData {
            lits,
            activity: 0.0,
            lbd: 0,
            learnt,
            dead: false,
        });
        self.arena_bytes += bytes;
        (self.arena.len() - 1) as u32
    }

    fn attach_clause(&mut self, cid: u32) {
        let (w0, w1) = {
            let c = &self.arena[cid as usize];
            (c.lits[0], c.lits[1])
        };
        self.watches[(!w0).code()].push(Watcher {
            clause: cid,
            blocker: w1,
        });
        self.watches[(!w1).code()].push(Watcher {
            clause: cid,
            blocker: w0,
        });
    }

    fn detach_clause(&mut self, cid: u32) {
        let (w0, w1) = {
            let c = &self.arena[cid as usize];
            (c.lits[0], c.lits[1])
        };
        self.watches[(!w0).code()].retain(|w| w.clause != cid);
        self.watches[(!w1).code()].retain(|w| w.clause != cid);
    }

    fn remove_clause(&mut self, cid: u32) {
        self.detach_clause(cid);
        let c = &mut self.arena[cid as usize];
        debug_assert!(!c.dead);
        c.dead = true;
        self.wasted_bytes += clause_bytes(c.lits.len());
    }

    /// Frees the storage of dead clauses once the wasted fraction crosses
    /// `gc_frac`. Clause ids stay stable; only the memory accounting and the
    /// tombstoned literal vectors are collected.
    fn check_garbage(&mut self) {
        if (self.wasted_bytes as f64) <= self.cfg.gc_frac * self.arena_bytes as f64 {
            return;
        }
        for c in self.arena.iter_mut().filter(|c| c.dead) {
            c.lits = Vec::new();
        }
        self.arena_bytes -= self.wasted_bytes;
        self.wasted_bytes = 0;
        self.stats.gc_events += 1;
    }

    #[inline]
    fn value(&self, l: Lit) -> Option<bool> {
        self.assigns[l.var().index()].map(|b| l.eval(b))
    }

    #[inline]
    fn decision_level_usize(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, from: Option<u32>) {
        debug_assert!(self.value(l).is_none());
        let v = l.var();
        self.assigns[v.index()] = Some(l.is_positive());
        self.var_level[v.index()] = self.decision_level_usize() as u32;
        self.reason[v.index()] = from;
        self.trail.push(l);
    }

    /// MiniSat-convention pseudo-random stream.
    fn drand(&mut self) -> f64 {
        self.rng_state *= 1_389_796.0;
        let q = (self.rng_state / 2_147_483_647.0) as i64;
        self.rng_state -= q as f64 * 2_147_483_647.0;
        self.rng_state / 2_147_483_647.0
    }

    fn push_lbd(&mut self, lbd: u32) {
        if self.lbd_queue_size < LBD_QUEUE_CAP {
            self.lbd_queue_size += 1;
        } else {
            self.fast_lbd_sum -= self.lbd_queue[self.lbd_queue_pos] as f64;
        }
        self.lbd_queue[self.lbd_queue_pos] = lbd;
        self.lbd_queue_pos = (self.lbd_queue_pos + 1) % LBD_QUEUE_CAP;
        self.fast_lbd_sum += lbd as f64;
        self.slow_lbd_sum += lbd as f64;
    }

    /// Unit propagation to fixpoint. Returns the falsified clause on conflict.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;

            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut kept = 0usize;
            let mut i = 0usize;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                // Blocker already true: clause satisfied, keep the watcher.
                if self.value(w.blocker) == Some(true) {
                    ws[kept] = w;
                    kept += 1;
                    continue;
                }
                let cid = w.clause as usize;
                // Ensure the falsified literal is at position 1.
                let not_p = !p;
                if self.arena[cid].lits[0] == not_p {
                    self.arena[cid].lits.swap(0, 1);
                }
                debug_assert_eq!(self.arena[cid].lits[1], not_p);
                let first = self.arena[cid].lits[0];
                if first != w.blocker && self.value(first) == Some(true) {
                    ws[kept] = Watcher {
                        clause: w.clause,
                        blocker: first,
                    };
                    kept += 1;
                    continue;
                }
                // Look for a new literal to watch.
                for k in 2..self.arena[cid].lits.len() {
                    if self.value(self.arena[cid].lits[k]) != Some(false) {
                        self.arena[cid].lits.swap(1, k);
                        let new_watch = self.arena[cid].lits[1];
                        self.watches[(!new_watch).code()].push(Watcher {
                            clause: w.clause,
                            blocker: first,
                        });
                        continue 'watchers;
                    }
                }
                // No new watch: clause is unit or falsified.
                ws[kept] = Watcher {
                    clause: w.clause,
                    blocker: first,
                };
                kept += 1;
                match self.value(first) {
                    Some(false) => {
                        conflict = Some(w.clause);
                        self.qhead = self.trail.len();
                        while i < ws.len() {
                            ws[kept] = ws[i];
                            kept += 1;
                            i += 1;
                        }
                    }
                    _ => self.enqueue(first, Some(w.clause)),
                }
            }
            ws.truncate(kept);
            debug_assert!(self.watches[p.code()].is_empty() || conflict.is_some());
            // Watches pushed for other literals while scanning are safe; only
            // p's own list was taken, and new watchers for p cannot appear
            // while p is true.
            let extra = std::mem::replace(&mut self.watches[p.code()], ws);
            self.watches[p.code()].extend(extra);
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn cancel_until_level(&mut self, level: usize) {
        if self.decision_level_usize() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for idx in (keep..self.trail.len()).rev() {
            let lit = self.trail[idx];
            let v = lit.var();
            let assigned = self.assigns[v.index()].expect("trail literals are assigned");
            self.saved[v.index()] = assigned;
            self.polarity[v.index()] = assigned;
            self.assigns[v.index()] = None;
            self.reason[v.index()] = None;
            self.heap.insert(v, &self.activity);
        }
        self.qhead = keep;
        self.trail.truncate(keep);
        self.trail_lim.truncate(level);
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first), the backtrack level and the clause LBD. Counter and
    /// LBD-statistic updates happen here, as do the activity bump hooks.
    fn analyze(
        &mut self,
        suite: &HeuristicSuite,
        confl: u32,
    ) -> Result<(Vec<Lit>, usize, u32), HookFault> {
        self.stats.conflicts += 1;
        self.conflict_r += 1;
        self.rephases += 1;

        let mut learnt: Vec<Lit> = vec![Lit::new(Var(0), true)]; // slot 0 filled at the end
        let mut path_c = 0u32;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut confl = confl;

        loop {
            if self.arena[confl as usize].learnt {
                suite.run_cla_bump(self, ClauseId(confl))?;
            }
            let start = usize::from(p.is_some());
            let clause_len = self.arena[confl as usize].lits.len();
            for j in start..clause_len {
                let q = self.arena[confl as usize].lits[j];
                let v = q.var();
                if !self.seen[v.index()] && self.var_level[v.index()] > 0 {
                    let inc = self.var_inc;
                    suite.run_var_bump(self, v, inc)?;
                    // Keep the heap consistent regardless of what the bump
                    // strategy did; update is idempotent.
                    self.heap.update(v, &self.activity);
                    self.seen[v.index()] = true;
                    self.analyze_toclear.push(v);
                    if self.var_level[v.index()] as usize >= self.decision_level_usize() {
                        path_c += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // Walk back to the next marked trail literal.
            while !self.seen[self.trail[index - 1].var().index()] {
                index -= 1;
            }
            index -= 1;
            let pl = self.trail[index];
            self.seen[pl.var().index()] = false;
            path_c -= 1;
            p = Some(pl);
            if path_c == 0 {
                break;
            }
            confl = self.reason[pl.var().index()].expect("non-UIP literals have reasons");
        }
        learnt[0] = !p.unwrap();

        if self.cfg.ccmin {
            self.minimize_learnt(&mut learnt);
        }

        // Move a highest-level literal to position 1; it defines the
        // backtrack level and becomes the second watch.
        let backtrack_level = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.var_level[learnt[i].var().index()]
                    > self.var_level[learnt[max_i].var().index()]
                {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.var_level[learnt[1].var().index()] as usize
        };

        let mut levels: Vec<u32> = learnt
            .iter()
            .map(|l| self.var_level[l.var().index()])
            .collect();
        levels.sort_unstable();
        levels.dedup();
        let lbd = levels.len() as u32;
        self.push_lbd(lbd);

        for v in self.analyze_toclear.drain(..) {
            self.seen[v.index()] = false;
        }
        Ok((learnt, backtrack_level, lbd))
    }

    /// Recursive minimization: drops learnt literals implied by the rest.
    fn minimize_learnt(&mut self, learnt: &mut Vec<Lit>) {
        let abstract_levels: u32 = learnt[1..].iter().fold(0, |acc, l| {
            acc | 1 << (self.var_level[l.var().index()] & 31)
        });
        let mut j = 1;
        for i in 1..learnt.len() {
            let l = learnt[i];
            if self.reason[l.var().index()].is_none() || !self.lit_redundant(l, abstract_levels) {
                learnt[j] = l;
                j += 1;
            }
        }
        learnt.truncate(j);
    }

    fn lit_redundant(&mut self, p: Lit, abstract_levels: u32) -> bool {
        let mut stack = vec![p];
        let top = self.analyze_toclear.len();
        while let Some(q) = stack.pop() {
            let cid = self.reason[q.var().index()].expect("stacked literals have reasons");
            let len = self.arena[cid as usize].lits.len();
            for j in 1..len {
                let l = self.arena[cid as usize].lits[j];
                let v = l.var();
                if self.seen[v.index()] || self.var_level[v.index()] == 0 {
                    continue;
                }
                if self.reason[v.index()].is_some()
                    && (1 << (self.var_level[v.index()] & 31)) & abstract_levels != 0
                {
                    self.seen[v.index()] = true;
                    self.analyze_toclear.push(v);
                    stack.push(l);
                } else {
                    for &v in &self.analyze_toclear[top..] {
                        self.seen[v.index()] = false;
                    }
                    self.analyze_toclear.truncate(top);
                    return false;
                }
            }
        }
        true
    }

    /// Records the current assignment as the local-best phase snapshot
    /// whenever the trail is the deepest seen since the threshold decayed.
    fn update_local_best(&mut self) {
        if self.trail.len() as f64 > self.threshold {
            self.threshold = self.trail.len() as f64;
            for &lit in &self.trail {
                let v = lit.var();
                self.local_best[v.index()] = self.assigns[v.index()].unwrap();
            }
        }
    }

    fn pick_branch_lit(&mut self) -> Option<Lit> {
        if self.cfg.rnd_freq > 0.0 && self.drand() < self.cfg.rnd_freq {
            let unassigned: u32 = self.assigns.iter().filter(|a| a.is_none()).count() as u32;
            if unassigned > 0 {
                let k = (self.drand() * unassigned as f64) as u32;
                let mut seen = 0;
                for i in 0..self.num_vars {
                    if self.assigns[i].is_none() {
                        if seen == k {
                            let v = Var(i as u32);
                            return Some(Lit::new(v, self.polarity[v.index()]));
                        }
                        seen += 1;
                    }
                }
            }
        }
        loop {
            let v = self.heap.pop_max(&self.activity)?;
            if self.assigns[v.index()].is_none() {
                return Some(Lit::new(v, self.polarity[v.index()]));
            }
        }
    }

    /// Engine-level clause database reduction: the lowest-activity half of
    /// the learnts is dropped, keeping locked clauses and binaries.
    fn reduce_learnts(&mut self) {
        let mut ids = self.learnts.clone();
        ids.sort_by(|&a, &b| {
            let (aa, ab) = (
                self.arena[a as usize].activity,
                self.arena[b as usize].activity,
            );
            aa.partial_cmp(&ab)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let half = ids.len() / 2;
        for &cid in &ids[..half] {
            let len = self.arena[cid as usize].lits.len();
            if len <= 2 || self.is_locked(cid) {
                continue;
            }
            self.remove_clause(cid);
        }
        self.learnts.retain(|&cid| !self.arena[cid as usize].dead);
        self.check_garbage();
    }

    fn is_locked(&self, cid: u32) -> bool {
        let c0 = self.arena[cid as usize].lits[0];
        self.value(c0) == Some(true) && self.reason[c0.var().index()] == Some(cid)
    }

    fn progress_estimate_value(&self) -> f64 {
        if self.num_vars == 0 {
            return 0.0;
        }
        let f = 1.0 / self.num_vars as f64;
        let mut progress = 0.0;
        for i in 0..=self.decision_level_usize() {
            let beg = if i == 0 { 0 } else { self.trail_lim[i - 1] };
            let end = if i == self.decision_level_usize() {
                self.trail.len()
            } else {
                self.trail_lim[i]
            };
            progress += f.powi(i as i32) * (end - beg) as f64;
        }
        progress / self.num_vars as f64
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// Live learnt clauses, for soundness checks in tests.
    pub fn learnt_clauses(&self) -> Vec<Vec<Lit>> {
        self.learnts
            .iter()
            .filter(|&&cid| !self.arena[cid as usize].dead)
            .map(|&cid| self.arena[cid as usize].lits.clone())
            .collect()
    }

    /// Every implied trail literal's reason clause must be unit under the
    /// prefix before it: all other literals false, the implied one true.
    #[cfg(debug_assertions)]
    fn debug_check_reasons(&self) {
        for &lit in &self.trail {
            let Some(cid) = self.reason[lit.var().index()] else {
                continue;
            };
            let c = &self.arena[cid as usize];
            assert!(!c.dead, "reason clause must be alive");
            assert_eq!(
                c.lits[0], lit,
                "reason clause stores the implied literal first"
            );
            for &other in &c.lits[1..] {
                assert_eq!(self.value(other), Some(false), "reason clause not unit");
            }
        }
    }

    /// Runs the search to completion or budget exhaustion.
    pub fn solve(&mut self, suite: &HeuristicSuite) -> Result<SolveResult, HookFault> {
        let start = Instant::now();
        let deadline = self.cfg.timeout_s;
        let mut wall_check_countdown = 1024u32;

        let finish =
            |solver: &Solver, status: SolveStatus, model: Option<Assignment>| SolveResult {
                status,
                model,
                stats: solver.stats.clone(),
                wall_time: start.elapsed().as_secs_f64(),
            };

        if !self.ok {
            return Ok(finish(self, SolveStatus::Unsat, None));
        }

        loop {
            if let Some(limit) = self.cfg.tick_limit {
                if self.stats.propagations >= limit {
                    return Ok(finish(self, SolveStatus::Unknown, None));
                }
            }
            wall_check_countdown -= 1;
            if wall_check_countdown == 0 {
                wall_check_countdown = 1024;
                if let Some(deadline) = deadline {
                    if start.elapsed().as_secs_f64() >= deadline {
                        return Ok(finish(self, SolveStatus::Unknown, None));
                    }
                }
            }

            if let Some(confl) = self.propagate() {
                #[cfg(debug_assertions)]
                if self.stats.conflicts.is_multiple_of(1024) {
                    self.debug_check_reasons();
                }
                if self.decision_level_usize() == 0 {
                    self.ok = false;
                    return Ok(finish(self, SolveStatus::Unsat, None));
                }
                self.update_local_best();
                let (learnt, backtrack_level, lbd) = self.analyze(suite, confl)?;
                self.cancel_until_level(backtrack_level);

                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let asserting = learnt[0];
                    let cid = self.alloc_clause(learnt, true);
                    self.arena[cid as usize].lbd = lbd;
                    self.learnts.push(cid);
                    self.stats.learnt_clauses += 1;
                    self.attach_clause(cid);
                    suite.run_cla_bump(self, ClauseId(cid))?;
                    self.enqueue(asserting, Some(cid));
                }

                self.var_inc /= self.cfg.var_decay;
                self.cla_inc /= self.cfg.cla_decay;

                // The three maintenance gates, evaluated independently after
                // each conflict.
                if suite.run_restart_condition(self)? {
                    self.stats.restarts += 1;
                    suite.run_restart_function(self)?;
                }
                if suite.run_rephase_condition(self)? {
                    self.stats.rephase_events += 1;
                    suite.run_rephase_function(self)?;
                }
                if suite.run_reduce_condition(self)? {
                    self.stats.reduce_events += 1;
                    self.reduce_learnts();
                    self.max_learnts *= 1.1;
                }
            } else {
                if self.trail.len() == self.num_vars {
                    let model = Assignment::from_values(self.assigns.clone());
                    return Ok(finish(self, SolveStatus::Sat, Some(model)));
                }
                self.stats.decisions += 1;
                self.trail_lim.push(self.trail.len());
                let lit = self
                    .pick_branch_lit()
                    .expect("an unassigned variable exists");
                self.enqueue(lit, None);
            }
        }
    }
}

/// One-shot convenience wrapper: build a solver and run it.
pub fn solve(
    formula: &Formula,
    suite: &HeuristicSuite,
    cfg: SolverConfig,
) -> Result<SolveResult, HookFault> {
    Solver::new(formula, cfg).solve(suite)
}

// ---------------------------------------------------------------------------
// The SolverView surface hooks operate on.
// ---------------------------------------------------------------------------

impl SolverView for Solver {
    fn conflicts(&self) -> i64 {
        self.stats.conflicts as i64
    }
    fn decisions(&self) -> i64 {
        self.stats.decisions as i64
    }
    fn lbd_queue_size(&self) -> i64 {
        self.lbd_queue_size as i64
    }
    fn fast_lbd_sum(&self) -> f64 {
        self.fast_lbd_sum
    }
    fn slow_lbd_sum(&self) -> f64 {
        self.slow_lbd_sum
    }
    fn trail_size(&self) -> i64 {
        self.trail.len() as i64
    }
    fn decision_level(&self) -> i64 {
        self.trail_lim.len() as i64
    }
    fn num_vars(&self) -> i64 {
        self.num_vars as i64
    }
    fn num_clauses(&self) -> i64 {
        self.original.len() as i64
    }
    fn learnts_size(&self) -> i64 {
        self.learnts.len() as i64
    }
    fn max_learnts(&self) -> f64 {
        self.max_learnts
    }
    fn garbage_frac(&self) -> f64 {
        self.cfg.gc_frac
    }
    fn wasted_bytes(&self) -> i64 {
        self.wasted_bytes as i64
    }
    fn arena_bytes(&self) -> i64 {
        self.arena_bytes as i64
    }
    fn restart_first(&self) -> i64 {
        self.cfg.rfirst as i64
    }
    fn var_inc(&self) -> f64 {
        self.var_inc
    }
    fn cla_inc(&self) -> f64 {
        self.cla_inc
    }

    fn conflict_r(&self) -> i64 {
        self.conflict_r
    }
    fn set_conflict_r(&mut self, x: i64) {
        self.conflict_r = x;
    }
    fn rephases(&self) -> i64 {
        self.rephases
    }
    fn set_rephases(&mut self, x: i64) {
        self.rephases = x;
    }
    fn rephase_count(&self) -> i64 {
        self.rephase_count
    }
    fn set_rephase_count(&mut self, x: i64) {
        self.rephase_count = x;
    }
    fn rephase_limit(&self) -> i64 {
        self.rephase_limit
    }
    fn set_rephase_limit(&mut self, x: i64) {
        self.rephase_limit = x;
    }
    fn threshold(&self) -> f64 {
        self.threshold
    }
    fn set_threshold(&mut self, x: f64) {
        self.threshold = x;
    }
    fn last_rephase_progress(&self) -> f64 {
        self.last_rephase_progress
    }
    fn set_last_rephase_progress(&mut self, x: f64) {
        self.last_rephase_progress = x;
    }
    fn last_restart_progress(&self) -> f64 {
        self.last_restart_progress
    }
    fn set_last_restart_progress(&mut self, x: f64) {
        self.last_restart_progress = x;
    }
    fn fast_avg(&self) -> f64 {
        self.fast_avg
    }
    fn set_fast_avg(&mut self, x: f64) {
        self.fast_avg = x;
    }
    fn slow_avg(&self) -> f64 {
        self.slow_avg
    }
    fn set_slow_avg(&mut self, x: f64) {
        self.slow_avg = x;
    }
    fn restart_count(&self) -> i64 {
        self.restart_count
    }
    fn set_restart_count(&mut self, x: i64) {
        self.restart_count = x;
    }
    fn set_var_inc(&mut self, x: f64) {
        self.var_inc = x;
    }
    fn set_cla_inc(&mut self, x: f64) {
        self.cla_inc = x;
    }

    fn activity(&self, v: Var) -> f64 {
        self.activity[v.index()]
    }
    fn set_activity(&mut self, v: Var, x: f64) {
        self.activity[v.index()] = x;
    }
    fn polarity(&self, v: Var) -> bool {
        self.polarity[v.index()]
    }
    fn set_polarity(&mut self, v: Var, x: bool) {
        self.polarity[v.index()] = x;
    }
    fn saved(&self, v: Var) -> bool {
        self.saved[v.index()]
    }
    fn set_saved(&mut self, v: Var, x: bool) {
        self.saved[v.index()] = x;
    }
    fn local_best(&self, v: Var) -> bool {
        self.local_best[v.index()]
    }
    fn set_local_best(&mut self, v: Var, x: bool) {
        self.local_best[v.index()] = x;
    }
    fn user_pol(&self, v: Var) -> Option<bool> {
        self.user_pol[v.index()]
    }
    fn set_user_pol(&mut self, v: Var, x: Option<bool>) {
        self.user_pol[v.index()] = x;
    }
    fn is_unassigned(&self, v: Var) -> bool {
        self.assigns[v.index()].is_none()
    }

    fn in_heap(&self, v: Var) -> bool {
        self.heap.in_heap(v)
    }
    fn heap_top_activity(&self) -> f64 {
        self.heap
            .peek()
            .map(|v| self.activity[v.index()])
            .unwrap_or(0.0)
    }
    fn heap_update(&mut self, v: Var) {
        self.heap.update(v, &self.activity);
    }
    fn heap_insert(&mut self, v: Var) {
        self.heap.insert(v, &self.activity);
    }

    fn cla_activity(&self, c: ClauseId) -> f64 {
        self.arena[c.0 as usize].activity
    }
    fn set_cla_activity(&mut self, c: ClauseId, x: f64) {
        self.arena[c.0 as usize].activity = x;
    }
    fn rescale_cla_activity(&mut self, factor: f64) {
        for &cid in &self.learnts {
            self.arena[cid as usize].activity *= factor;
        }
    }
    fn clamp_cla_activity_min(&mut self, min: f64) {
        for &cid in &self.learnts {
            let a = &mut self.arena[cid as usize].activity;
            if *a < min {
                *a = min;
            }
        }
    }

    fn cancel_until(&mut self, level: i64) {
        self.cancel_until_level(level.max(0) as usize);
    }
    fn reduce_db(&mut self) {
        self.reduce_learnts();
    }
    fn rebuild_order_heap(&mut self) {
        let unassigned: Vec<Var> = (0..self.num_vars as u32)
            .map(Var)
            .filter(|v| self.assigns[v.index()].is_none())
            .collect();
        self.heap.rebuild(unassigned.into_iter(), &self.activity);
    }
    fn clear_lbd_queue(&mut self) {
        self.lbd_queue_size = 0;
        self.lbd_queue_pos = 0;
        self.fast_lbd_sum = 0.0;
    }
    fn progress_estimate(&self) -> f64 {
        self.progress_estimate_value()
    }
    fn rand01(&mut self) -> f64 {
        self.drand()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hooks::SolverView;

    fn unit_formula(num_vars: usize, units: usize) -> Formula {
        let mut f = Formula::new(num_vars);
        for i in 0..units {
            f.add_clause(vec![Lit::new(Var(i as u32), true)]);
        }
        f
    }

    #[test]
    fn lbd_queue_ring_keeps_sum_invariant() {
        let mut solver = Solver::new(&unit_formula(4, 0), SolverConfig::default());
        let mut pushed: Vec<u32> = Vec::new();
        let mut rng = 1u64;
        for _ in 0..1700 {
            rng = rng
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let lbd = (rng >> 33) as u32 % 30 + 1;
            solver.push_lbd(lbd);
            pushed.push(lbd);
            assert!(solver.lbd_queue_size <= LBD_QUEUE_CAP);
            let window: u64 = pushed
                .iter()
                .rev()
                .take(LBD_QUEUE_CAP)
                .map(|&x| x as u64)
                .sum();
            assert_eq!(solver.fast_lbd_sum, window as f64);
            let total: u64 = pushed.iter().map(|&x| x as u64).sum();
            assert_eq!(solver.slow_lbd_sum, total as f64);
        }
        assert_eq!(solver.lbd_queue_size, LBD_QUEUE_CAP);
    }

    #[test]
    fn uniform_activity_rescale_keeps_branch_argmax() {
        let mut solver = Solver::new(&unit_formula(6, 0), SolverConfig::default());
        let activities = [3.0, 9.0, 9.0, 1.0, 7.5, 0.25];
        for (i, &a) in activities.iter().enumerate() {
            solver.set_activity(Var(i as u32), a);
        }
        solver.rebuild_order_heap();
        let before = solver.heap.peek().unwrap();
        for factor in [1e-50, 1e-20, 1e12, 3.0] {
            for i in 0..6 {
                let a = solver.activity(Var(i)) * factor;
                solver.set_activity(Var(i), a);
            }
            solver.set_var_inc(solver.var_inc() * factor);
            solver.rebuild_order_heap();
            assert_eq!(
                solver.heap.peek().unwrap(),
                before,
                "argmax var changed at {factor}"
            );
        }
    }

    #[test]
    fn progress_estimate_boundary_values() {
        // Nothing assigned.
        let solver = Solver::new(&unit_formula(4, 0), SolverConfig::default());
        assert_eq!(solver.progress_estimate_value(), 0.0);
        // Half the variables assigned at level 0.
        let solver = Solver::new(&unit_formula(4, 2), SolverConfig::default());
        assert_eq!(solver.progress_estimate_value(), 0.5);
        // Everything assigned at level 0.
        let solver = Solver::new(&unit_formula(4, 4), SolverConfig::default());
        assert_eq!(solver.progress_estimate_value(), 1.0);
    }

    #[test]
    fn rnd_init_randomizes_activities_deterministically() {
        let cfg = SolverConfig {
            rnd_init: true,
            seed: 5,
            ..SolverConfig::default()
        };
        let a = Solver::new(&unit_formula(8, 0), cfg.clone());
        let b = Solver::new(&unit_formula(8, 0), cfg);
        assert_eq!(a.activity, b.activity);
        assert!(a.activity.iter().any(|&x| x > 0.0));
        assert!(a.activity.iter().all(|&x| x < 0.000_011));
    }

    fn clause(lits: &[i64]) -> Vec<Lit> {
        lits.iter().map(|&x| Lit::from_dimacs(x)).collect()
    }

    #[test]
    fn propagation_chain_assigns_at_level_zero() {
        // (x1), (¬x1 ∨ x2), (¬x2 ∨ x3): the unit cascades through both
        // binary clauses without a conflict.
        let mut f = Formula::new(3);
        f.add_clause(clause(&[1]));
        f.add_clause(clause(&[-1, 2]));
        f.add_clause(clause(&[-2, 3]));
        let mut solver = Solver::new(&f, SolverConfig::default());
        assert_eq!(solver.propagate(), None);
        assert_eq!(solver.trail.len(), 3);
        assert!(solver.trail_lim.is_empty());
        for v in 0..3 {
            assert_eq!(solver.assigns[v], Some(true));
            assert_eq!(solver.var_level[v], 0);
        }
        // Implied literals carry their reasons; the root unit has none.
        assert_eq!(solver.reason[0], None);
        assert!(solver.reason[1].is_some());
        assert!(solver.reason[2].is_some());
    }

    #[test]
    fn propagation_reports_falsified_clause() {
        // (x1), (¬x1 ∨ x2), (¬x1 ∨ ¬x2) conflicts at level 0.
        let mut f = Formula::new(2);
        f.add_clause(clause(&[1]));
        f.add_clause(clause(&[-1, 2]));
        f.add_clause(clause(&[-1, -2]));
        let mut solver = Solver::new(&f, SolverConfig::default());
        let confl = solver.propagate().expect("conflict must be detected");
        let lits = &solver.arena[confl as usize].lits;
        // Every literal of the returned clause is false under the trail.
        assert!(lits.iter().all(|&l| solver.value(l) == Some(false)));
    }

    #[test]
    fn first_uip_worked_example_learns_a_unit() {
        // Deciding against x1 forces x2 via (x1 ∨ x2) and conflicts with
        // (x1 ∨ ¬x2); first-UIP analysis learns the unit (x1) with LBD 1
        // and backtracks to level 0, after which the instance is satisfiable
        // with x1 = true.
        let mut f = Formula::new(2);
        f.add_clause(clause(&[1, 2]));
        f.add_clause(clause(&[1, -2]));
        let mut solver = Solver::new(&f, SolverConfig::default());
        let result = solver.solve(&HeuristicSuite::all_baseline()).unwrap();
        assert_eq!(result.status, SolveStatus::Sat);
        assert_eq!(result.stats.conflicts, 1, "exactly one conflict analyzed");
        let model = result.model.unwrap();
        assert_eq!(model.get(Var(0)), Some(true), "the learnt unit asserts x1");
        // The learnt clause was a unit: LBD 1 entered the queue once.
        assert_eq!(solver.lbd_queue_size, 1);
        assert_eq!(solver.fast_lbd_sum, 1.0);
        assert_eq!(solver.slow_lbd_sum, 1.0);
        // Unit learnts are enqueued directly, not stored.
        assert!(solver.learnt_clauses().is_empty());
    }

    #[test]
    fn backtrack_reinserts_unassigned_vars_into_heap() {
        let f = unit_formula(6, 0);
        let mut solver = Solver::new(&f, SolverConfig::default());
        // Make three decisions by hand.
        for v in [0u32, 2, 4] {
            solver.trail_lim.push(solver.trail.len());
            solver.enqueue(Lit::new(Var(v), true), None);
        }
        assert_eq!(solver.decision_level_usize(), 3);
        solver.cancel_until_level(1);
        assert_eq!(solver.decision_level_usize(), 1);
        // Every unassigned variable is back in the order heap, and the one
        // still-assigned decision is not required to be.
        for v in 0..6u32 {
            let v = Var(v);
            if solver.assigns[v.index()].is_none() {
                assert!(solver.heap.in_heap(v), "{v} missing from heap");
            }
        }
        // Phases of the unwound literals were saved.
        assert!(solver.saved[2]);
        assert!(solver.saved[4]);
        assert!(solver.polarity[2]);
        // Backtracking to the current level is a no-op.
        let trail_before = solver.trail.len();
        solver.cancel_until_level(1);
        assert_eq!(solver.trail.len(), trail_before);
    }

    #[test]
    fn reduce_drops_the_lowest_activity_half() {
        // Ten removable learnts with distinct activities: exactly the five
        // lowest-activity ones are dropped; binaries survive regardless.
        let f = unit_formula(8, 0);
        let mut solver = Solver::new(&f, SolverConfig::default());
        let mut ids = Vec::new();
        for i in 0..10u32 {
            let lits = clause(&[
                (i % 8) as i64 + 1,
                -(((i + 1) % 8) as i64 + 1),
                ((i + 2) % 8) as i64 + 1,
            ]);
            let cid = solver.alloc_clause(lits, true);
            solver.arena[cid as usize].activity = (i + 1) as f64;
            solver.attach_clause(cid);
            solver.learnts.push(cid);
            ids.push(cid);
        }
        solver.reduce_learnts();
        let alive: Vec<u32> = ids
            .iter()
            .copied()
            .filter(|&cid| !solver.arena[cid as usize].dead)
            .collect();
        assert_eq!(
            alive,
            ids[5..].to_vec(),
            "five lowest-activity learnts removed"
        );
        assert!(solver.wasted_bytes > 0 || solver.stats.gc_events > 0);

        // Binary learnts are never removed even at rock-bottom activity.
        let f = unit_formula(4, 0);
        let mut solver = Solver::new(&f, SolverConfig::default());
        let mut ids = Vec::new();
        for i in 0..4u32 {
            let lits = if i < 2 {
                clause(&[(i % 4) as i64 + 1, -(((i + 1) % 4) as i64 + 1)])
            } else {
                clause(&[1, 2, (i % 4) as i64 + 1])
            };
            let cid = solver.alloc_clause(lits, true);
            solver.arena[cid as usize].activity = (i + 1) as f64;
            solver.attach_clause(cid);
            solver.learnts.push(cid);
            ids.push(cid);
        }
        solver.reduce_learnts();
        assert!(
            !solver.arena[ids[0] as usize].dead,
            "binary learnt retained"
        );
        assert!(
            !solver.arena[ids[1] as usize].dead,
            "binary learnt retained"
        );

        // Empty learnt store: reduction is a no-op.
        let mut solver = Solver::new(&unit_formula(3, 0), SolverConfig::default());
        solver.reduce_learnts();
        assert_eq!(solver.learnts.len(), 0);
    }

    #[test]
    fn reduce_keeps_reason_clauses() {
        let f = unit_formula(4, 0);
        let mut solver = Solver::new(&f, SolverConfig::default());
        // Two low-activity learnts; the lowest is the reason of an implied
        // literal and must survive the sweep.
        let locked = solver.alloc_clause(clause(&[1, -2, 3]), true);
        solver.arena[locked as usize].activity = 0.001;
        solver.attach_clause(locked);
        solver.learnts.push(locked);
        let loose = solver.alloc_clause(clause(&[2, -3, 4]), true);
        solver.arena[loose as usize].activity = 0.002;
        solver.attach_clause(loose);
        solver.learnts.push(loose);
        // High-activity fillers so both low-activity clauses sit in the
        // lower half the sweep scans.
        for (i, act) in [(0i64, 10.0), (1, 11.0)] {
            let cid = solver.alloc_clause(clause(&[1 + i, 2 + i, -(3 + i)]), true);
            solver.arena[cid as usize].activity = act;
            solver.attach_clause(cid);
            solver.learnts.push(cid);
        }

        solver.trail_lim.push(solver.trail.len());
        solver.enqueue(Lit::from_dimacs(1), Some(locked));
        assert!(solver.is_locked(locked));

        solver.reduce_learnts();
        assert!(
            !solver.arena[locked as usize].dead,
            "locked clause retained"
        );
        assert!(
            solver.arena[loose as usize].dead,
            "unlocked low-activity clause removed"
        );
    }
}
