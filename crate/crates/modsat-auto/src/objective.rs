//! The evaluation interface search loops optimize against, plus the real
//! implementation backed by the benchmark runner.

use modsat_bench::runner::{run_dataset, TimeModel};
use modsat_bench::{par2, LoadedDataset, RunRecord};
use modsat_core::solver::SolverConfig;
use modsat_core::HeuristicSuite;

use crate::AutoError;

/// PAR-2 of a suite over an indexed subset of a fixed dataset.
pub trait SuiteObjective {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn evaluate(&mut self, suite: &HeuristicSuite, instances: &[usize]) -> Result<f64, AutoError>;
}

/// Real objective: runs the solver over the dataset under a fixed config,
/// timeout and time model. With the deterministic time model, evaluations
/// are bit-reproducible.
pub struct BenchObjective {
    pub dataset: LoadedDataset,
    pub cfg: SolverConfig,
    pub timeout_s: f64,
    pub jobs: usize,
    pub time_model: TimeModel,
    pub evaluations: usize,
    /// Records of the most recent evaluation.
    pub last_records: Vec<RunRecord>,
}

impl BenchObjective {
    pub fn new(dataset: LoadedDataset, cfg: SolverConfig, timeout_s: f64) -> BenchObjective {
        BenchObjective {
            dataset,
            cfg,
            timeout_s,
            jobs: 1,
            time_model: TimeModel::deterministic(),
            evaluations: 0,
            last_records: Vec::new(),
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> BenchObjective {
        self.jobs = jobs;
        self
    }

    pub fn with_time_model(mut self, time_model: TimeModel) -> BenchObjective {
        self.time_model = time_model;
        self
    }
}

impl SuiteObjective for BenchObjective {
    fn len(&self) -> usize {
        self.dataset.instances.len()
    }

    fn evaluate(&mut self, suite: &HeuristicSuite, instances: &[usize]) -> Result<f64, AutoError> {
        let subset: Vec<(String, modsat_core::Formula)> = instances
            .iter()
            .map(|&i| self.dataset.instances[i].clone())
            .collect();
        let records = run_dataset(
            &subset,
            suite,
            &self.cfg,
            self.timeout_s,
            self.jobs,
            self.time_model,
        );
        let report = par2(&records, self.timeout_s)?;
        self.evaluations += 1;
        self.last_records = records;
        Ok(report.par2)
    }
}

/// Scripted objective for tests: a closure over the suite and subset.
pub struct ScriptedObjective<F: FnMut(&HeuristicSuite, &[usize]) -> f64> {
    pub size: usize,
    pub calls: Vec<Vec<usize>>,
    pub script: F,
}

impl<F: FnMut(&HeuristicSuite, &[usize]) -> f64> ScriptedObjective<F> {
    pub fn new(size: usize, script: F) -> Self {
        ScriptedObjective {
            size,
            calls: Vec::new(),
            script,
        }
    }
}

impl<F: FnMut(&HeuristicSuite, &[usize]) -> f64> SuiteObjective for ScriptedObjective<F> {
    fn len(&self) -> usize {
        self.size
    }

    fn evaluate(&mut self, suite: &HeuristicSuite, instances: &[usize]) -> Result<f64, AutoError> {
        self.calls.push(instances.to_vec());
        Ok((self.script)(suite, instances))
    }
}
