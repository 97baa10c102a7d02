//! Machine-readable reports shared by the command-line driver and the test
//! suites. The schema carries no timestamps, so equal configurations produce
//! byte-identical serializations.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Status of one check within a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduce: Option<String>,
}

impl CheckResult {
    pub fn pass(name: &str, detail: serde_json::Value) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            status: Status::Pass,
            detail,
            reproduce: None,
        }
    }

    pub fn fail(name: &str, detail: serde_json::Value, reproduce: &str) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            status: Status::Fail,
            detail,
            reproduce: Some(reproduce.to_string()),
        }
    }

    pub fn info(name: &str, detail: serde_json::Value) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            status: Status::Info,
            detail,
            reproduce: None,
        }
    }
}

/// A full run report; serialization is deterministic for a fixed
/// configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn all_passing(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            out.push_str(&format!("[{tag}] {}", c.name));
            match c.status {
                Status::Info => {
                    if let Some(map) = c.detail.as_object() {
                        for (k, v) in map {
                            let rendered = match v {
                                serde_json::Value::String(s) => s.clone(),
                                other => other.to_string(),
                            };
                            out.push_str(&format!("\n       {k}: {rendered}"));
                        }
                    }
                }
                Status::Fail => {
                    out.push_str(&format!("\n       detail: {}", c.detail));
                    if let Some(r) = &c.reproduce {
                        out.push_str(&format!("\n       reproduce: {r}"));
                    }
                }
                Status::Pass => {}
            }
            out.push('\n');
        }
        out
    }
}
