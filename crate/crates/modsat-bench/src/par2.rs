//! PAR-2 scoring and speedup.

use serde::{Deserialize, Serialize};

use modsat_core::solver::{SolveStatus, Stats};

use crate::BenchError;

/// Outcome of one solver run on one instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub status: SolveStatus,
    /// Seconds; synthetic under the deterministic time model.
    pub wall_time: f64,
    pub stats: Stats,
    /// Digest of the suite that produced this run.
    pub suite: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fault: Option<String>,
}

/// Per-instance penalized time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PenalizedTime {
    pub instance: String,
    pub status: SolveStatus,
    pub wall_time: f64,
    pub penalized: f64,
}

/// A PAR-2 summary over one record set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Par2Report {
    pub schema: u32,
    pub timeout: f64,
    pub par2: f64,
    pub solved: usize,
    pub total: usize,
    pub per_instance: Vec<PenalizedTime>,
}

/// Mean penalized runtime: solved-in-time runs count their time, everything
/// else (timeout, fault, over-limit finish) counts twice the timeout bound.
pub fn par2(records: &[RunRecord], timeout: f64) -> Result<Par2Report, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyRecords);
    }
    let mut per_instance = Vec::with_capacity(records.len());
    let mut sum = 0.0;
    let mut solved = 0usize;
    for r in records {
        let in_time = r.status != SolveStatus::Unknown && r.wall_time <= timeout;
        let penalized = if in_time { r.wall_time } else { 2.0 * timeout };
        if in_time {
            solved += 1;
        }
        sum += penalized;
        per_instance.push(PenalizedTime {
            instance: r.instance.clone(),
            status: r.status,
            wall_time: r.wall_time,
            penalized,
        });
    }
    Ok(Par2Report {
        schema: 1,
        timeout,
        par2: sum / records.len() as f64,
        solved,
        total: records.len(),
        per_instance,
    })
}

/// Relative improvement of `v_a` over `v_b`: `(v_a - v_b) / max(v_a, v_b)`.
pub fn speedup(v_a: f64, v_b: f64) -> Result<f64, BenchError> {
    let base = v_a.max(v_b);
    if base == 0.0 {
        return Err(BenchError::ZeroSpeedupBase);
    }
    Ok((v_a - v_b) / base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(instance: &str, status: SolveStatus, wall_time: f64) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            status,
            wall_time,
            stats: Stats::default(),
            suite: "test".into(),
            seed: 0,
            fault: None,
        }
    }

    #[test]
    fn worked_example() {
        // Times (80, 120, fail) with a 100 second bound: (80 + 200 + 200)/3.
        let records = vec![
            record("i1", SolveStatus::Sat, 80.0),
            record("i2", SolveStatus::Sat, 120.0),
            record("i3", SolveStatus::Unknown, 100.0),
        ];
        let report = par2(&records, 100.0).unwrap();
        assert_eq!(report.par2, 160.0);
        assert_eq!(report.solved, 1);
        assert_eq!(report.total, 3);
        assert_eq!(report.per_instance[1].penalized, 200.0);
    }

    #[test]
    fn boundary_and_degenerate_cases() {
        // Everything solved exactly at the bound: PAR-2 equals the bound.
        let records = vec![
            record("a", SolveStatus::Sat, 100.0),
            record("b", SolveStatus::Unsat, 100.0),
        ];
        assert_eq!(par2(&records, 100.0).unwrap().par2, 100.0);

        // Everything failed: PAR-2 is twice the bound, nothing solved.
        let records = vec![
            record("a", SolveStatus::Unknown, 100.0),
            record("b", SolveStatus::Unknown, 0.1),
        ];
        let report = par2(&records, 100.0).unwrap();
        assert_eq!(report.par2, 200.0);
        assert_eq!(report.solved, 0);

        assert!(matches!(par2(&[], 100.0), Err(BenchError::EmptyRecords)));
    }

    #[test]
    fn par2_is_monotone_in_runtimes() {
        let base = vec![
            record("a", SolveStatus::Sat, 10.0),
            record("b", SolveStatus::Sat, 50.0),
        ];
        let before = par2(&base, 100.0).unwrap().par2;
        for bump in [60.0, 99.0, 120.0, 500.0] {
            let mut worse = base.clone();
            worse[1].wall_time = bump;
            let after = par2(&worse, 100.0).unwrap().par2;
            assert!(after >= before);
        }
    }

    #[test]
    fn speedup_formula() {
        assert_eq!(speedup(200.0, 100.0).unwrap(), 0.5);
        assert_eq!(speedup(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(speedup(100.0, 200.0).unwrap(), -0.5);
        assert!(matches!(
            speedup(0.0, 0.0),
            Err(BenchError::ZeroSpeedupBase)
        ));
    }

    #[test]
    fn speedup_is_antisymmetric_and_bounded() {
        use modsat_core::hooks::snapshot::SplitMix64;
        let mut rng = SplitMix64::new(3);
        for _ in 0..1000 {
            let a = rng.rand01() * 1e4 + 1e-9;
            let b = rng.rand01() * 1e4 + 1e-9;
            let ab = speedup(a, b).unwrap();
            let ba = speedup(b, a).unwrap();
            assert_eq!(ab, -ba);
            assert!((-1.0..=1.0).contains(&ab));
        }
    }
}
