//! The JSON envelope shared by every command report.
//!
//! Reports carry no timing or host information, so the same command and inputs always produce
//! the same bytes.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "dgcyl-report/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// SHA-256 of the canonical command line and the contents of every input file.
    pub input_sha256: String,
    pub passed: bool,
    /// Checks that were requested but not run, with the reason.
    pub skipped: Vec<String>,
    pub result: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, input: &[u8], passed: bool, skipped: Vec<String>, result: serde_json::Value) -> Self {
        Report {
            schema: SCHEMA,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input_sha256: hex::encode(Sha256::digest(input)),
            passed,
            skipped,
            result,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_of_the_input_only() {
        let a = Report::new("x", b"abc", true, vec![], serde_json::json!({}));
        assert_eq!(a.input_sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert_eq!(a.to_json(), Report::new("x", b"abc", true, vec![], serde_json::json!({})).to_json());
    }
}
