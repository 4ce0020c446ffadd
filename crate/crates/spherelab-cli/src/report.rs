//! Machine-readable run reports.
//!
//! Reports are deterministic for fixed inputs and seeds: maps are sorted,
//! encodings canonical, and nothing time- or host-dependent is recorded.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One named pass/fail audit inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// The result of one CLI invocation.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    /// Subcommand path, e.g. `rigid exhaust`.
    pub command: String,
    /// Echo of the parameters that shaped the run.
    pub parameters: BTreeMap<String, String>,
    /// SHA-256 digests of input files.
    pub inputs: BTreeMap<String, String>,
    pub counts: BTreeMap<String, u64>,
    pub checks: Vec<Check>,
    /// Command-specific payload: certificates, graphs, witnesses.
    pub certificates: serde_json::Value,
    /// Non-fatal events: out-of-model slots, skipped decompositions.
    pub frontier: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            inputs: BTreeMap::new(),
            counts: BTreeMap::new(),
            checks: Vec::new(),
            certificates: serde_json::Value::Null,
            frontier: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn input_digest(&mut self, name: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>();
        self.inputs.insert(name.to_string(), digest);
    }

    pub fn count(&mut self, key: &str, value: u64) {
        self.counts.insert(key.to_string(), value);
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Display) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.to_string(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Plain-text rendering for runs without `--json`.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("spherelab {}", self.command));
        if !self.parameters.is_empty() {
            let params = self
                .parameters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(" ({params})"));
        }
        out.push('\n');
        for (k, v) in &self.counts {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                out.push_str(&format!("  [{tag}] {}\n", c.name));
            } else {
                out.push_str(&format!("  [{tag}] {} — {}\n", c.name, c.detail));
            }
        }
        for f in &self.frontier {
            out.push_str(&format!("  note: {f}\n"));
        }
        out
    }
}

/// An error that aborts a run before its checks complete: bad arguments,
/// unreadable or malformed inputs.  Failing checks are not errors; they are
/// reported and drive the exit code separately.
#[derive(Debug)]
pub struct CliError {
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

pub fn usage(msg: impl Display) -> CliError {
    CliError {
        message: msg.to_string(),
    }
}

/// Reads a file and records its digest under the given input name.
pub fn read_input(report: &mut Report, name: &str, path: &Path) -> Result<Vec<u8>, CliError> {
    let bytes =
        fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    report.input_digest(name, &bytes);
    Ok(bytes)
}

/// Parses JSON input with a path-bearing error message.
pub fn parse_json<T: serde::de::DeserializeOwned>(
    bytes: &[u8],
    what: &str,
) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| usage(format!("invalid {what}: {e}")))
}

/// Writes an output file, or stdout when the path is `-`.
pub fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    if path.as_os_str() == "-" {
        print!("{contents}");
        return Ok(());
    }
    fs::write(path, contents)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}
