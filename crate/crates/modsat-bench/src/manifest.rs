//! Dataset manifests: the instance list plus the training configuration
//! (timeout and hook candidates) the search layer consumes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema: u32,
    pub name: String,
    /// Instance files, relative to the manifest location.
    pub instances: Vec<String>,
    pub training_timeout_s: f64,
    /// Hook slots worth optimizing on this dataset, 1-based indices.
    pub function_candidates: Vec<u8>,
}

impl DatasetManifest {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.schema != 1 {
            return Err(BenchError::Manifest(format!(
                "unsupported schema {}",
                self.schema
            )));
        }
        if self.training_timeout_s <= 0.0 {
            return Err(BenchError::Manifest(
                "training timeout must be positive".into(),
            ));
        }
        let mut seen = [false; 8];
        for &c in &self.function_candidates {
            if !(1..=7).contains(&c) {
                return Err(BenchError::Manifest(format!(
                    "candidate index {c} outside 1..=7"
                )));
            }
            if seen[c as usize] {
                return Err(BenchError::Manifest(format!(
                    "candidate index {c} repeated"
                )));
            }
            seen[c as usize] = true;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<(DatasetManifest, PathBuf), BenchError> {
        let text = fs::read_to_string(path)?;
        let manifest: DatasetManifest = serde_json::from_str(&text)?;
        manifest.validate()?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Ok((manifest, base))
    }

    pub fn save(&self, path: &Path) -> Result<(), BenchError> {
        self.validate()?;
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn instance_paths(&self, base: &Path) -> Vec<PathBuf> {
        self.instances.iter().map(|i| base.join(i)).collect()
    }
}

/// Training-set configuration presets: `(training timeout seconds, hook
/// candidate indices)` per scenario name. Indices use the fixed numbering
/// 1=rephase_condition … 7=cla_bump_activity.
pub fn training_preset(name: &str) -> Option<(f64, Vec<u8>)> {
    let (timeout, candidates): (f64, [u8; 4]) = match name {
        "cryptography-ascon" => (800.0, [1, 2, 3, 6]),
        "register-allocation" => (5000.0, [2, 3, 5, 6]),
        "social-golfer" => (2000.0, [1, 4, 5, 6]),
        "hashtable-safety" => (500.0, [2, 4, 5, 7]),
        "argumentation-2023" => (2000.0, [1, 2, 3, 6]),
        "argumentation-2024" => (2000.0, [1, 2, 3, 5]),
        "hamiltonian" => (800.0, [3, 4, 5, 6]),
        "minesweeper" => (500.0, [2, 4, 3, 7]),
        "knighttour" => (2000.0, [1, 3, 4, 7]),
        "zamkeller" => (2000.0, [1, 3, 4, 6]),
        "eda" => (800.0, [2, 5, 6, 7]),
        _ => return None,
    };
    Some((timeout, candidates.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eda_preset_matches_training_table() {
        let (timeout, candidates) = training_preset("eda").unwrap();
        assert_eq!(timeout, 800.0);
        assert_eq!(candidates, vec![2, 5, 6, 7]);
        assert!(training_preset("unknown").is_none());
    }

    #[test]
    fn manifest_round_trips_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        let manifest = DatasetManifest {
            schema: 1,
            name: "t".into(),
            instances: vec!["a.cnf".into()],
            training_timeout_s: 10.0,
            function_candidates: vec![2, 5, 6, 7],
        };
        manifest.save(&path).unwrap();
        let (loaded, base) = DatasetManifest::load(&path).unwrap();
        assert_eq!(loaded, manifest);
        assert_eq!(loaded.instance_paths(&base), vec![dir.path().join("a.cnf")]);

        let bad = DatasetManifest {
            function_candidates: vec![2, 2],
            ..manifest.clone()
        };
        assert!(bad.validate().is_err());
        let bad = DatasetManifest {
            function_candidates: vec![0],
            ..manifest
        };
        assert!(bad.validate().is_err());
    }
}
