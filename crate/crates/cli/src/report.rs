use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use tenbound::io::{to_json_string, to_json_string_pretty};

#[derive(Debug, Clone, PartialEq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(path: &Path, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// The JSON envelope every command prints.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub outputs: Value,
    pub timing_ms: f64,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs.iter().map(|d| json!({"path": d.path, "sha256": d.sha256})).collect::<Vec<_>>(),
            "outputs": self.outputs,
            "timing_ms": self.timing_ms,
            "warnings": self.warnings,
        })
    }

    pub fn render(&self, pretty: bool) -> String {
        let v = self.to_value();
        if pretty {
            to_json_string_pretty(&v)
        } else {
            to_json_string(&v)
        }
    }
}
