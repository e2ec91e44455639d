//! JSON run reports.

use std::path::Path;

use kcosym_core::{Check, GridSpec};
use serde::Serialize;

use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckEntry {
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl From<Check> for CheckEntry {
    fn from(c: Check) -> Self {
        Self {
            value: c.value,
            threshold: c.threshold,
            pass: c.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checks {
    pub hj: CheckEntry,
    pub closedness: CheckEntry,
    pub compatibility: CheckEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_independence: Option<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hdw: Option<CheckEntry>,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        [
            Some(self.hj),
            Some(self.closedness),
            Some(self.compatibility),
            self.q_independence,
            self.path,
            self.hdw,
        ]
        .into_iter()
        .flatten()
        .all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub steps: Vec<usize>,
    pub nodes: usize,
}

impl From<&GridSpec> for GridMeta {
    fn from(g: &GridSpec) -> Self {
        Self {
            origin: g.origin().to_vec(),
            spacing: g.spacing().to_vec(),
            steps: g.steps().to_vec(),
            nodes: g.node_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegratorMeta {
    pub method: &'static str,
    pub subdivisions: usize,
    pub axis_order: Vec<usize>,
    pub blowup_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub wall_clock_seconds: f64,
}

/// Everything a `check` or `solve` run measured. Apart from `timing`, a
/// report depends only on the problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: &'static str,
    pub problem: String,
    pub pass: bool,
    pub checks: Checks,
    /// Number of `(x, q)` points the section residuals were sampled at.
    pub samples: usize,
    pub grid: GridMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_hypotheses: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_scale: Option<f64>,
    pub files: Vec<String>,
    pub timing: Timing,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| CliError::Failed(format!("report serialization: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()?)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    /// Human-readable summary, one line per check.
    pub fn summary(&self) -> String {
        let c = &self.checks;
        let mut out = format!("{} ({}, {} grid nodes)\n", self.problem, self.command, self.grid.nodes);
        let rows = [
            ("hj", Some(c.hj)),
            ("closedness", Some(c.closedness)),
            ("compatibility", Some(c.compatibility)),
            ("q-independence", c.q_independence),
            ("path", c.path),
            ("hdw", c.hdw),
        ];
        for (name, entry) in rows {
            if let Some(e) = entry {
                out.push_str(&format!(
                    "  {name:<15} {:>10.3e} <= {:>10.3e}  {}\n",
                    e.value,
                    e.threshold,
                    if e.pass { "PASS" } else { "FAIL" }
                ));
            }
        }
        out.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        out
    }
}
