use pauli_grading::verify::{Check, SuiteReport};
use serde::Serialize;
use serde_json::Value;

/// A group of checks; one per verification suite, or one for a single command.
#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(name: &str, checks: Vec<Check>) -> Self {
        Self {
            name: name.into(),
            checks,
            notes: Vec::new(),
        }
    }
}

impl From<SuiteReport> for Section {
    fn from(r: SuiteReport) -> Self {
        Self {
            name: r.suite.name().into(),
            checks: r.checks,
            notes: r.notes,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub n: u32,
    pub passed: bool,
    pub sections: Vec<Section>,
    pub data: Value,
    /// Wall-clock time; only present with `--timing` so that reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: String, n: u32, sections: Vec<Section>, data: Value) -> Self {
        let passed = sections.iter().all(|s| s.checks.iter().all(|c| c.passed));
        Self {
            command,
            n,
            passed,
            sections,
            data,
            timing_ms: None,
        }
    }
}
