//! Verification reports.

use std::collections::BTreeMap;

use qcluster::verify::{Check, Status};
use serde::Serialize;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    /// Failures first, then suites alphabetically; cases keep their run order.
    pub fn new(mut checks: Vec<Check>, timings_ms: Option<BTreeMap<String, u128>>) -> Self {
        checks.sort_by(|a, b| (a.status != Status::Fail).cmp(&(b.status != Status::Fail)).then(a.suite.cmp(&b.suite)));
        Self { version: REPORT_VERSION, checks, timings_ms }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(suite: &str, name: &str, status: Status) -> Check {
        Check { suite: suite.into(), name: name.into(), status, detail: None }
    }

    #[test]
    fn empty_report() {
        let r = Report::new(vec![], None);
        assert_eq!(r.to_json(), "{\n  \"version\": 1,\n  \"checks\": []\n}");
        assert!(r.passed());
    }

    #[test]
    fn single_pass() {
        let r = Report::new(vec![check("compat", "x", Status::Pass)], None);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][0]["status"], "pass");
        assert_eq!(v["checks"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn failures_first_then_suites_then_index() {
        let r = Report::new(
            vec![
                check("tsystem", "a", Status::Pass),
                check("compat", "b", Status::Pass),
                check("sigma", "c", Status::Fail),
                check("compat", "d", Status::Pass),
                check("compat", "e", Status::Fail),
            ],
            None,
        );
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["e", "c", "b", "d", "a"]);
        assert!(!r.passed());
    }
}
