//! The machine-readable report and its text rendering.

use serde::Serialize;
use serde_json::Value;

use crate::input::InputInfo;

pub const SCHEMA: &str = "movcat-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    VerificationFailed,
    Inconclusive,
}

impl Status {
    pub fn exit_code(&self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

/// One computed item: a verdict, ledger, table or fixture.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    /// Index into `inputs`, when the entry comes from an input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<usize>,
    pub kind: &'static str,
    pub conclusive: bool,
    /// Set when the computation itself failed a check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub value: Value,
    #[serde(skip)]
    pub text: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: Tool,
    pub command: &'static str,
    pub options: Value,
    pub inputs: Vec<InputInfo>,
    pub results: Vec<Entry>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    pub timing: Timing,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.results {
            let label = e.input.map(|i| self.inputs[i].name.as_str());
            if let Some(label) = label {
                out.push_str(&format!("== {label}\n"));
            }
            out.push_str(&e.text);
            if !e.text.ends_with('\n') {
                out.push('\n');
            }
            if let Some(f) = &e.failure {
                out.push_str(&format!("CHECK FAILED: {f}\n"));
            }
        }
        if let Some(v) = &self.verification {
            if v.failures.is_empty() {
                out.push_str(&format!("verified {} certificate(s)\n", v.checked));
            } else {
                for f in &v.failures {
                    out.push_str(&format!("VERIFICATION FAILED: {f}\n"));
                }
            }
        }
        out
    }

    pub fn refresh_status(&mut self) {
        let failed = self.results.iter().any(|e| e.failure.is_some())
            || self
                .verification
                .as_ref()
                .is_some_and(|v| !v.failures.is_empty());
        self.status = if failed {
            Status::VerificationFailed
        } else if !self.results.is_empty() && self.results.iter().all(|e| !e.conclusive) {
            Status::Inconclusive
        } else {
            Status::Ok
        };
    }
}

/// The report with its timing removed, for comparisons across runs.
pub fn without_timing(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).expect("valid report");
    if let Some(o) = v.as_object_mut() {
        o.remove("timing");
    }
    v
}
