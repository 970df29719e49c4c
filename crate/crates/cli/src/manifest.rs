//! Output documents and the run manifests embedded in them.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::commands::Invocation;
use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "qchancap/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(flatten)]
    pub invocation: Invocation,
    pub version: String,
    /// `sha256:` of the compact JSON of the result.
    pub checksum: String,
    #[serde(default)]
    pub argv: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    pub command: String,
    pub result: Value,
    pub manifest: RunManifest,
}

pub fn checksum(result: &Value) -> String {
    let bytes = serde_json::to_vec(result).expect("JSON values always serialize");
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(7 + 2 * digest.len());
    hex.push_str("sha256:");
    for b in digest.iter() {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

impl Document {
    pub fn new(invocation: Invocation, result: Value, argv: Vec<String>) -> Self {
        let checksum = checksum(&result);
        Document {
            schema: SCHEMA.to_owned(),
            command: invocation.name().to_owned(),
            result,
            manifest: RunManifest {
                invocation,
                version: qchancap_core::VERSION.to_owned(),
                checksum,
                argv,
            },
        }
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

/// Reads a manifest from either a full output document or a bare manifest.
pub fn read_manifest(text: &str) -> CliResult<RunManifest> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("manifest: malformed JSON: {e}")))?;
    let inner = value.get("manifest").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| CliError::usage(format!("manifest: {e}")))
}
