use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "REPORT_ONLY")]
    ReportOnly,
}

impl Verdict {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ReportOnly => "REPORT_ONLY",
        }
    }
}

/// One verified inequality or identity. Fields are declared in key order so
/// the JSON is sorted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub lhs: f64,
    pub n: usize,
    pub params: BTreeMap<String, Value>,
    pub rhs: f64,
    pub slack: f64,
    pub stderr: f64,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
}

impl CheckReport {
    pub fn new(check_name: &str, lhs: f64, rhs: f64, stderr: f64, n: usize, verdict: Verdict) -> Self {
        Self {
            check_name: check_name.to_string(),
            lhs,
            n,
            params: BTreeMap::new(),
            rhs,
            slack: rhs - lhs,
            stderr,
            verdict,
            witnesses: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witnesses.push(w);
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// `slack - z * stderr`.
    pub fn margin(&self, z: f64) -> f64 {
        self.slack - z * self.stderr
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{:<28} {:<11} lhs={:.6e} rhs={:.6e} slack={:.3e} se={:.2e} n={}",
            self.check_name,
            self.verdict.label(),
            self.lhs,
            self.rhs,
            self.slack,
            self.stderr,
            self.n
        )
    }
}

/// A list of checks; the run fails iff any of them fails.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn push(&mut self, r: CheckReport) {
        self.checks.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckReport>) {
        self.checks.extend(rs);
    }

    pub fn has_fail(&self) -> bool {
        self.checks.iter().any(CheckReport::is_fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check_name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&serde_json::to_value(self)?)?)
    }
}
