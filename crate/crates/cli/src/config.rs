use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qsc_core::geometry::{DiffConfig, DiffScheme, MAX_DIM};
use qsc_core::invariants::SuiteConfig;

use crate::CliError;

/// Everything a `verify` run depends on. Serialized verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: String,
    pub k: usize,
    pub generators: Vec<String>,
    pub num_points: usize,
    pub seed: u64,
    pub diff: String,
    pub step: f64,
    pub richardson: bool,
    pub tolerance_core: f64,
    pub tolerance_audit: f64,
    pub output: Option<PathBuf>,
    pub audit_soft: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            manifold: "flat".into(),
            k: 2,
            generators: vec!["linear_j".into(), "random_poly:3".into()],
            num_points: 10,
            seed: 42,
            diff: "analytic".into(),
            step: 1e-4,
            richardson: false,
            tolerance_core: 1e-6,
            tolerance_audit: 1e-6,
            output: None,
            audit_soft: false,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.num_points == 0 {
            return Err(CliError::Config("num_points must be at least 1".into()));
        }
        if !(self.tolerance_core > 0.0 && self.tolerance_audit > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        if self.k == 0 || 2 * self.k > MAX_DIM {
            return Err(CliError::Config(format!(
                "k = {} out of range: the real dimension 2k must be between 2 and {MAX_DIM}",
                self.k
            )));
        }
        if self.generators.is_empty() {
            return Err(CliError::Config("at least one generator is required".into()));
        }
        self.diff_config()?;
        Ok(())
    }

    pub fn diff_config(&self) -> Result<DiffConfig, CliError> {
        let scheme = DiffScheme::parse(&self.diff)?;
        Ok(DiffConfig::new(scheme, self.step, self.richardson)?)
    }

    pub fn suite_config(&self) -> Result<SuiteConfig, CliError> {
        Ok(SuiteConfig {
            diff: self.diff_config()?,
            tol_core: self.tolerance_core,
            tol_audit: self.tolerance_audit,
            ..SuiteConfig::default()
        })
    }
}
