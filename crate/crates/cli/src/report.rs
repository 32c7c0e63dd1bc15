use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use qsc_core::invariants::{Classification, IdentityResult};
use qsc_core::ManifoldSpec;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: &str = "qsc-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    /// Seconds since the Unix epoch; the only field allowed to differ between reruns.
    pub timestamp: u64,
    pub config_echo: RunConfig,
    pub manifold: ManifoldInfo,
    pub points: Vec<Vec<f64>>,
    pub results: Vec<ResultRow>,
    pub summary: Summary,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldInfo {
    pub name: String,
    pub label: String,
    pub dim: usize,
    pub k: usize,
    pub kahler_expected: bool,
}

impl ManifoldInfo {
    pub fn of(m: &ManifoldSpec) -> Self {
        Self {
            name: m.name.clone(),
            label: m.chart.label.clone(),
            dim: m.dim(),
            k: m.k(),
            kahler_expected: m.kahler_expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub id: String,
    pub point_index: usize,
    pub max_residual: f64,
    pub scale: f64,
    pub relative: f64,
    pub pass: bool,
    pub classification: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis_defect: Option<f64>,
}

impl From<&IdentityResult> for ResultRow {
    fn from(r: &IdentityResult) -> Self {
        Self {
            id: r.id.clone(),
            point_index: r.point_index,
            max_residual: r.max_residual,
            scale: r.scale,
            relative: r.relative,
            pass: r.pass,
            classification: r.classification.as_str().to_string(),
            hypothesis_defect: r.hypothesis_defect,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub core_pass: bool,
    pub audit_pass: bool,
    pub expected_fail_ok: bool,
}

impl Summary {
    pub fn of(results: &[IdentityResult]) -> Self {
        let all = |c: Classification| results.iter().filter(|r| r.classification == c).all(|r| r.pass);
        Self {
            core_pass: all(Classification::Core),
            audit_pass: all(Classification::Audit),
            expected_fail_ok: all(Classification::ExpectedFail),
        }
    }

    pub fn success(&self, audit_soft: bool) -> bool {
        self.core_pass && self.expected_fail_ok && (self.audit_pass || audit_soft)
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serializable");
        s.push('\n');
        s
    }

    /// One line per identity: the worst point, and how many points passed.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:<13} {:>6} {:>12} {:>12} {:>12}  status",
            "identity", "class", "points", "max_resid", "scale", "relative"
        );
        let mut i = 0;
        while i < self.results.len() {
            let id = &self.results[i].id;
            let rows: Vec<&ResultRow> = self.results[i..].iter().take_while(|r| &r.id == id).collect();
            i += rows.len();
            let passed = rows.iter().filter(|r| r.pass).count();
            let worst = rows
                .iter()
                .find(|r| !r.pass)
                .copied()
                .unwrap_or_else(|| rows.iter().max_by(|a, b| a.relative.total_cmp(&b.relative)).unwrap());
            let _ = writeln!(
                out,
                "{:<14} {:<13} {:>6} {:>12.3e} {:>12.3e} {:>12.3e}  {}",
                id,
                worst.classification,
                format!("{passed}/{}", rows.len()),
                worst.max_residual,
                worst.scale,
                worst.relative,
                status(&rows, passed)
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "core: {}  audit: {}  expected-fail: {}",
            verdict(s.core_pass),
            verdict(s.audit_pass),
            verdict(s.expected_fail_ok)
        );
        out
    }
}

/// `vacuous` marks conditional identities whose hypothesis held at no point.
fn status(rows: &[&ResultRow], passed: usize) -> &'static str {
    let hypothesis_tol = qsc_core::invariants::SuiteConfig::default().hypothesis_tol;
    if passed < rows.len() {
        "FAIL"
    } else if rows
        .iter()
        .all(|r| r.hypothesis_defect.is_some_and(|h| h >= hypothesis_tol))
    {
        "vacuous"
    } else {
        "ok"
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
