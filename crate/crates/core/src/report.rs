//! Verification reports shared by the library and the CLI.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One compared pair of quantities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: Value,
    pub rhs: Value,
    /// u-adic agreement valuation; `None` means exact comparison.
    pub agreement: Option<i64>,
    pub required: Option<i64>,
    pub passed: bool,
}

impl Check {
    pub fn exact(name: impl Into<String>, lhs: Value, rhs: Value) -> Self {
        let passed = lhs == rhs;
        Check { name: name.into(), lhs, rhs, agreement: None, required: None, passed }
    }

    pub fn flag(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Check { name: name.into(), lhs: detail, rhs: Value::Null, agreement: None, required: None, passed }
    }

    pub fn numeric(name: impl Into<String>, lhs: Value, rhs: Value, agreement: i64, required: i64) -> Self {
        Check { name: name.into(), lhs, rhs, agreement: Some(agreement), required: Some(required), passed: agreement >= required }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Value,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, params: Value) -> Self {
        VerificationReport { identity: identity.into(), params, checks: vec![], notes: vec![], passed: true }
    }

    pub fn push(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Smallest agreement valuation over the numeric checks.
    pub fn min_agreement(&self) -> Option<i64> {
        self.checks.iter().filter_map(|c| c.agreement).min()
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}
