//! Timed execution of solver configurations over datasets.
//!
//! Two time models are supported. `Wall` measures and limits real elapsed
//! time. `Ticks` charges a fixed synthetic duration per propagation and
//! enforces the timeout as a propagation budget, which makes every reported
//! time — and therefore every PAR-2 — bit-reproducible across runs and
//! machines; the search and acceptance layers rely on this.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use modsat_core::cnf::{parse_dimacs, Formula};
use modsat_core::hooks::HeuristicSuite;
use modsat_core::solver::{SolveStatus, Solver, SolverConfig};
use modsat_core::util::fnv1a64;

use crate::manifest::DatasetManifest;
use crate::par2::RunRecord;
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeModel {
    Wall,
    /// Deterministic: one propagation costs `seconds_per_tick` seconds.
    Ticks {
        seconds_per_tick: f64,
    },
}

impl TimeModel {
    pub const DEFAULT_SECONDS_PER_TICK: f64 = 1e-6;

    pub fn deterministic() -> TimeModel {
        TimeModel::Ticks {
            seconds_per_tick: Self::DEFAULT_SECONDS_PER_TICK,
        }
    }
}

/// Stable digest identifying a suite in run records.
pub fn suite_digest(suite: &HeuristicSuite) -> String {
    format!("{:016x}", fnv1a64(suite.to_json().as_bytes()))
}

/// Runs one instance under the given timeout. A DSL hook fault is recorded
/// as UNKNOWN with the fault message; it never escapes as an error.
pub fn run_instance(
    instance: &str,
    formula: &Formula,
    suite: &HeuristicSuite,
    cfg: &SolverConfig,
    timeout_s: f64,
    time_model: TimeModel,
) -> RunRecord {
    let mut cfg = cfg.clone();
    match time_model {
        TimeModel::Wall => {
            cfg.timeout_s = Some(timeout_s);
            cfg.tick_limit = None;
        }
        TimeModel::Ticks { seconds_per_tick } => {
            cfg.timeout_s = None;
            cfg.tick_limit = Some((timeout_s / seconds_per_tick).ceil() as u64);
        }
    }
    let seed = cfg.seed;
    let started = std::time::Instant::now();
    let mut solver = Solver::new(formula, cfg);
    let synthetic = |propagations: u64| match time_model {
        TimeModel::Wall => None,
        TimeModel::Ticks { seconds_per_tick } => Some(propagations as f64 * seconds_per_tick),
    };
    match solver.solve(suite) {
        Ok(result) => RunRecord {
            instance: instance.to_string(),
            status: result.status,
            wall_time: synthetic(result.stats.propagations).unwrap_or(result.wall_time),
            stats: result.stats,
            suite: suite_digest(suite),
            seed,
            fault: None,
        },
        Err(fault) => {
            // Faulted runs score as failures through their UNKNOWN status;
            // the recorded time is the work actually done.
            let stats = solver.stats().clone();
            RunRecord {
                instance: instance.to_string(),
                status: SolveStatus::Unknown,
                wall_time: synthetic(stats.propagations)
                    .unwrap_or_else(|| started.elapsed().as_secs_f64()),
                stats,
                suite: suite_digest(suite),
                seed,
                fault: Some(fault.to_string()),
            }
        }
    }
}

/// A dataset loaded into memory: `(instance id, formula)` pairs.
pub struct LoadedDataset {
    pub name: String,
    pub instances: Vec<(String, Formula)>,
    pub training_timeout_s: f64,
    pub function_candidates: Vec<u8>,
}

impl LoadedDataset {
    pub fn from_manifest(path: &Path) -> Result<LoadedDataset, BenchError> {
        let (manifest, base) = DatasetManifest::load(path)?;
        let mut instances = Vec::with_capacity(manifest.instances.len());
        for name in &manifest.instances {
            let text = std::fs::read_to_string(base.join(name))?;
            let parsed = parse_dimacs(&text, false)?;
            instances.push((name.clone(), parsed.formula));
        }
        Ok(LoadedDataset {
            name: manifest.name,
            instances,
            training_timeout_s: manifest.training_timeout_s,
            function_candidates: manifest.function_candidates,
        })
    }
}

/// Evaluates a suite over instances, up to `jobs` in parallel. Records come
/// back in instance order, so concurrency never changes a report.
pub fn run_dataset(
    instances: &[(String, Formula)],
    suite: &HeuristicSuite,
    cfg: &SolverConfig,
    timeout_s: f64,
    jobs: usize,
    time_model: TimeModel,
) -> Vec<RunRecord> {
    let jobs = jobs.max(1).min(instances.len().max(1));
    if jobs <= 1 {
        return instances
            .iter()
            .map(|(id, f)| run_instance(id, f, suite, cfg, timeout_s, time_model))
            .collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<RunRecord>>> = Mutex::new(vec![None; instances.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= instances.len() {
                    break;
                }
                let (id, f) = &instances[i];
                let record = run_instance(id, f, suite, cfg, timeout_s, time_model);
                slots.lock().unwrap()[i] = Some(record);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_3sat;
    use crate::par2::par2;
    use modsat_core::dsl;
    use modsat_core::hooks::{Slot, Strategy};

    #[test]
    fn trivial_instance_solves_well_under_timeout() {
        let f = random_3sat(10, 20, 1);
        let record = run_instance(
            "t",
            &f,
            &HeuristicSuite::all_baseline(),
            &SolverConfig::default(),
            10.0,
            TimeModel::Wall,
        );
        assert_ne!(record.status, SolveStatus::Unknown);
        assert!(record.wall_time < 1.0);
    }

    #[test]
    fn tick_timeout_forces_unknown() {
        let f = random_3sat(80, 340, 3);
        let record = run_instance(
            "t",
            &f,
            &HeuristicSuite::all_baseline(),
            &SolverConfig::default(),
            0.000_05, // 50 ticks
            TimeModel::deterministic(),
        );
        assert_eq!(record.status, SolveStatus::Unknown);
    }

    #[test]
    fn faulting_hook_records_unknown_with_detail() {
        let program = dsl::compile(
            "return 1 / (conflicts - conflicts) > 0;",
            Slot::ReduceCondition,
        )
        .unwrap();
        let suite =
            HeuristicSuite::all_baseline().with_slot(Slot::ReduceCondition, Strategy::Dsl(program));
        let f = random_3sat(30, 128, 5);
        let record = run_instance(
            "t",
            &f,
            &suite,
            &SolverConfig::default(),
            1.0,
            TimeModel::deterministic(),
        );
        assert_eq!(record.status, SolveStatus::Unknown);
        let fault = record.fault.expect("fault detail recorded");
        assert!(
            fault.contains("reduce_condition"),
            "fault names the slot: {fault}"
        );
    }

    #[test]
    fn concurrency_does_not_change_reports() {
        let instances: Vec<(String, Formula)> = (0..8)
            .map(|i| (format!("i{i}"), random_3sat(25, 106, i)))
            .collect();
        let suite = HeuristicSuite::all_baseline();
        let cfg = SolverConfig::default();
        let serial = run_dataset(&instances, &suite, &cfg, 1.0, 1, TimeModel::deterministic());
        let parallel = run_dataset(&instances, &suite, &cfg, 1.0, 4, TimeModel::deterministic());
        let serial_report = par2(&serial, 1.0).unwrap();
        let parallel_report = par2(&parallel, 1.0).unwrap();
        assert_eq!(
            serde_json::to_string(&serial_report).unwrap(),
            serde_json::to_string(&parallel_report).unwrap()
        );
    }
}
