use serde::Serialize;
use serde_json::Value;

/// Bumped whenever the layout of any `result` payload changes.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize)]
pub struct OutputEnvelope {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub warnings: Vec<String>,
}

impl OutputEnvelope {
    pub fn new(command: &'static str, inputs: impl Serialize, result: impl Serialize) -> Self {
        OutputEnvelope {
            schema_version: SCHEMA_VERSION,
            command,
            inputs: serde_json::to_value(inputs).expect("inputs serialize"),
            result: serde_json::to_value(result).expect("result serializes"),
            warnings: Vec::new(),
        }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }
}
