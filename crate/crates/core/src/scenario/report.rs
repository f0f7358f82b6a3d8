//! Scenario report: one record per check, serialized as JSON.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
    Error,
    BudgetExceeded,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
            Verdict::Error => "error",
            Verdict::BudgetExceeded => "budget_exceeded",
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Inapplicable)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub kind: String,
    pub verdict: Verdict,
    pub certificate: Value,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub version: String,
    pub mode: String,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// 0 if every check passed or was inapplicable, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().all(|c| c.verdict.is_success()) {
            0
        } else {
            1
        }
    }

    /// The same report with all timings zeroed.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.millis = 0;
        }
        r
    }
}

/// Checks a JSON document against the report schema:
/// `{"scenario", "version", "mode", "checks": [{"id", "kind", "verdict",
/// "certificate", "millis"}]}` with no extra keys.
pub fn validate_report_json(doc: &Value) -> Result<(), String> {
    let obj = doc.as_object().ok_or("report is not an object")?;
    let keys = ["scenario", "version", "mode", "checks"];
    if obj.len() != keys.len() || !keys.iter().all(|k| obj.contains_key(*k)) {
        return Err(format!("report keys must be exactly {keys:?}"));
    }
    for k in ["scenario", "version"] {
        if !obj[k].is_string() {
            return Err(format!("'{k}' must be a string"));
        }
    }
    if !matches!(obj["mode"].as_str(), Some("exact" | "float")) {
        return Err("'mode' must be \"exact\" or \"float\"".into());
    }
    let checks = obj["checks"].as_array().ok_or("'checks' must be an array")?;
    let check_keys = ["id", "kind", "verdict", "certificate", "millis"];
    for (i, c) in checks.iter().enumerate() {
        let c = c.as_object().ok_or(format!("check {i} is not an object"))?;
        if c.len() != check_keys.len() || !check_keys.iter().all(|k| c.contains_key(*k)) {
            return Err(format!("check {i} keys must be exactly {check_keys:?}"));
        }
        if !c["id"].is_string() || !c["kind"].is_string() {
            return Err(format!("check {i}: 'id' and 'kind' must be strings"));
        }
        if !matches!(
            c["verdict"].as_str(),
            Some("pass" | "fail" | "inapplicable" | "error" | "budget_exceeded")
        ) {
            return Err(format!("check {i}: invalid verdict {}", c["verdict"]));
        }
        if !c["millis"].is_u64() {
            return Err(format!("check {i}: 'millis' must be a non-negative integer"));
        }
    }
    Ok(())
}
