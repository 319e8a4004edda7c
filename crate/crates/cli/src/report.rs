//! Check reports and their serialization.

use std::path::{Path, PathBuf};

use koranyi_core::check::CheckOutcome;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    /// The effective configuration after file and flag merging.
    pub config: Value,
    pub checks: Vec<CheckOutcome>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
}

impl Report {
    pub fn new(suite: impl Into<String>, config: &impl Serialize) -> Self {
        Self {
            suite: suite.into(),
            config: serde_json::to_value(config).expect("configs serialize"),
            checks: Vec::new(),
            summary: Summary::default(),
            data: Value::Null,
            artifacts: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckOutcome) {
        self.summary.total += 1;
        if check.passed {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = CheckOutcome>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn with_data(mut self, data: &impl Serialize) -> Self {
        self.data = serde_json::to_value(data).expect("report data serializes");
        self
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Writes `<dir>/<suite>.json` and returns its path.
    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.json", self.suite));
        std::fs::write(&path, self.to_json())?;
        Ok(path)
    }
}

/// A rendering of a report as one markdown table row per check.
pub fn markdown(report: &Report) -> String {
    let mut out = format!(
        "## {}\n\n{} of {} checks passed\n\n| check | status | measured | expected | tolerance | citation |\n|---|---|---|---|---|---|\n",
        report.suite, report.summary.passed, report.summary.total
    );
    for c in &report.checks {
        out.push_str(&format!(
            "| {} | {} | {:.3e} | {:.3e} | {:.1e} | {} |\n",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.measured,
            c.expected,
            c.tolerance,
            c.citation
        ));
    }
    out
}
