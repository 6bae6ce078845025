//! Persistent run reports: line-delimited records, summary documents and
//! cactus-plot data.

use std::fs;
use std::io::Write;
use std::path::Path;

use modsat_core::solver::SolveStatus;

use crate::par2::{Par2Report, RunRecord};
use crate::BenchError;

/// Appends records as JSON lines; the file is created when missing.
pub fn append_records(path: &Path, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    for r in records {
        writeln!(file, "{}", serde_json::to_string(r)?)?;
    }
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        out.push(serde_json::from_str(line)?);
    }
    Ok(out)
}

pub fn write_report(path: &Path, report: &Par2Report) -> Result<(), BenchError> {
    fs::write(path, serde_json::to_string_pretty(report)?)?;
    Ok(())
}

/// Cactus-plot rows: for each solved run in increasing time order, the
/// cumulative number of instances solved within that time. Tab-separated
/// with a header, ready for plotting.
pub fn cactus_data(records: &[RunRecord], timeout: f64) -> String {
    let mut times: Vec<f64> = records
        .iter()
        .filter(|r| r.status != SolveStatus::Unknown && r.wall_time <= timeout)
        .map(|r| r.wall_time)
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = String::from("solved\ttime_s\n");
    for (i, t) in times.iter().enumerate() {
        out.push_str(&format!("{}\t{}\n", i + 1, t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use modsat_core::solver::Stats;

    fn record(instance: &str, status: SolveStatus, wall_time: f64) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            status,
            wall_time,
            stats: Stats::default(),
            suite: "s".into(),
            seed: 0,
            fault: None,
        }
    }

    #[test]
    fn records_round_trip_through_jsonl() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let records = [
            record("a", SolveStatus::Sat, 1.0),
            record("b", SolveStatus::Unknown, 2.0),
        ];
        append_records(&path, &records[..1]).unwrap();
        append_records(&path, &records[1..]).unwrap();
        let back = read_records(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].instance, "a");
        assert_eq!(back[1].status, SolveStatus::Unknown);
    }

    #[test]
    fn cactus_counts_solved_in_time_order() {
        let records = vec![
            record("a", SolveStatus::Sat, 3.0),
            record("b", SolveStatus::Sat, 1.0),
            record("c", SolveStatus::Unknown, 0.5),
            record("d", SolveStatus::Unsat, 9.0), // over the bound
        ];
        let data = cactus_data(&records, 5.0);
        assert_eq!(data, "solved\ttime_s\n1\t1\n2\t3\n");
    }
}
