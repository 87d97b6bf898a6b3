//! Structured pass/fail results shared by every check.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(rename = "status", serialize_with = "status")]
    pub passed: bool,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

fn status<S: serde::Serializer>(passed: &bool, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(if *passed { "pass" } else { "fail" })
}

impl Check {
    pub fn pass(name: impl Into<String>, details: Value) -> Self {
        Check { name: name.into(), passed: true, details, counterexample: None }
    }

    pub fn fail(name: impl Into<String>, details: Value, counterexample: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, details, counterexample: Some(counterexample.into()) }
    }

    /// Pass iff `failures` is empty; the first failure becomes the counterexample.
    pub fn from_failures(name: impl Into<String>, checked: usize, failures: Vec<String>) -> Self {
        let details = serde_json::json!({ "checked": checked, "failures": failures.len() });
        match failures.into_iter().next() {
            None => Check::pass(name, details),
            Some(first) => Check::fail(name, details, first),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
