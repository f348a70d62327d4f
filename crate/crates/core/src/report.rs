//! Check records and reports shared by the verification suites and the CLI.

use std::time::Instant;

use serde::Serialize;

use crate::calculus::CalcElement;
use crate::hopf::{Uea, UeaTensor};

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verified identity. `residual` is empty exactly when the check passes.
#[derive(Serialize, Clone, Debug)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub lhs_nf: String,
    pub rhs_nf: String,
    pub residual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failing_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Check {
    pub fn new(id: impl Into<String>, lhs: String, rhs: String, residual: Option<String>) -> Self {
        let status = if residual.is_none() { Status::Pass } else { Status::Fail };
        Check {
            id: id.into(),
            status,
            lhs_nf: lhs,
            rhs_nf: rhs,
            residual: residual.unwrap_or_default(),
            first_failing_order: None,
            elapsed_ms: None,
        }
    }

    /// Compare two calculus elements exactly.
    pub fn elements(id: impl Into<String>, lhs: &CalcElement, rhs: &CalcElement) -> Self {
        let diff = lhs - rhs;
        let residual = (!diff.is_zero()).then(|| diff.to_string());
        let mut c = Check::new(id, lhs.to_string(), rhs.to_string(), residual);
        c.first_failing_order = diff.terms().filter_map(|(_, s)| s.nu_valuation()).min();
        c
    }

    /// A claim that `value` vanishes.
    pub fn zero(id: impl Into<String>, value: &CalcElement) -> Self {
        Self::elements(id, value, &value.zero_like())
    }

    pub fn tensors(id: impl Into<String>, lhs: &UeaTensor, rhs: &UeaTensor, names: &[String]) -> Self {
        let diff = lhs.sub(rhs);
        let residual = (!diff.is_zero()).then(|| diff.fmt_with(names));
        let mut c = Check::new(id, lhs.fmt_with(names), rhs.fmt_with(names), residual);
        c.first_failing_order = diff.nu_valuation();
        c
    }

    pub fn ueas(id: impl Into<String>, lhs: &Uea, rhs: &Uea, names: &[String]) -> Self {
        let diff = lhs.sub(rhs);
        let residual = (!diff.is_zero()).then(|| diff.fmt_with(names));
        let mut c = Check::new(id, lhs.fmt_with(names), rhs.fmt_with(names), residual);
        c.first_failing_order = diff.terms().filter_map(|(_, s)| s.nu_valuation()).min();
        c
    }

    /// A check whose evaluation raised an error.
    pub fn error(id: impl Into<String>, err: &crate::error::Error) -> Self {
        Check::new(id, String::new(), String::new(), Some(format!("error: {err}")))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// `pass id` or `FAIL id: residual`.
    pub fn status_line(&self) -> String {
        if self.passed() {
            format!("pass {}", self.id)
        } else {
            format!("FAIL {}: {}", self.id, self.residual)
        }
    }

    pub fn with_elapsed(mut self, start: Instant) -> Self {
        self.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        self
    }
}

#[derive(Serialize, Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub config: serde_json::Value,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

impl Report {
    /// Checks are sorted by id so output does not depend on scheduling.
    pub fn new(config: serde_json::Value, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = checks.iter().filter(|c| c.passed()).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
        Report { config, summary, checks }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn strip_timing(&mut self) {
        for c in &mut self.checks {
            c.elapsed_ms = None;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
