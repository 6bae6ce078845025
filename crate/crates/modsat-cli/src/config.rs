//! The shared run-configuration file. Subcommand flags override whatever the
//! file provides; the file keeps long runs archivable.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use modsat_core::solver::SolverConfig;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfigFile {
    pub dataset: Option<PathBuf>,
    pub suite: Option<PathBuf>,
    pub template: Option<PathBuf>,
    pub solver: Option<SolverConfig>,
    pub timeout_s: Option<f64>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    /// `wall` or `ticks`.
    pub time_model: Option<String>,
    /// `live`, `replay:<path>` or `record:<path>`.
    pub llm: Option<String>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfigFile {
    pub fn load(path: &Path) -> Result<RunConfigFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: RunConfigFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let config = config.resolved(base);
        for (what, p) in [
            ("dataset", &config.dataset),
            ("suite", &config.suite),
            ("template", &config.template),
        ] {
            if let Some(p) = p {
                if !p.exists() {
                    bail!("config {what} path does not exist: {}", p.display());
                }
            }
        }
        Ok(config)
    }

    /// Relative paths in the file are taken relative to its directory.
    fn resolved(mut self, base: &Path) -> RunConfigFile {
        let resolve = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        self.dataset = self.dataset.map(resolve);
        self.suite = self.suite.map(resolve);
        self.template = self.template.map(resolve);
        self.out_dir = self.out_dir.map(resolve);
        self
    }
}
