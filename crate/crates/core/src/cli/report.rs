use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::input::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// One checked claim; `claim` is a stable machine-readable tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictEntry {
    pub claim: String,
    pub status: Status,
    pub detail: String,
}

/// Everything a command reports. The digest covers every field except
/// `timing_ms`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: u64,
    pub command: String,
    pub input_digest: Option<String>,
    pub warnings: Vec<String>,
    pub summary: Vec<String>,
    pub verdicts: Vec<VerdictEntry>,
    pub counts: BTreeMap<String, Value>,
    pub certificates: BTreeMap<String, Value>,
    #[serde(skip)]
    pub timing_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Report {
    pub fn new(command: &str, input: Option<&str>) -> Self {
        Report {
            version: SCHEMA_VERSION,
            command: command.to_string(),
            input_digest: input.map(|t| sha256_hex(t.as_bytes())),
            warnings: Vec::new(),
            summary: Vec::new(),
            verdicts: Vec::new(),
            counts: BTreeMap::new(),
            certificates: BTreeMap::new(),
            timing_ms: 0,
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub fn verdict(&mut self, claim: &str, status: Status, detail: impl Into<String>) {
        self.verdicts.push(VerdictEntry { claim: claim.to_string(), status, detail: detail.into() });
    }

    pub fn count(&mut self, key: &str, value: impl Serialize) {
        self.counts.insert(key.to_string(), serde_json::to_value(value).expect("serializable count"));
    }

    pub fn certificate(&mut self, key: &str, value: impl Serialize) {
        self.certificates.insert(key.to_string(), serde_json::to_value(value).expect("serializable certificate"));
    }

    /// SHA-256 of the canonical JSON of the report without timing.
    pub fn digest(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("serializable report").as_bytes())
    }

    /// 0 when every verdict passes, 1 on any failure, else 2 on any
    /// inconclusive verdict.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            1
        } else if self.verdicts.iter().any(|v| v.status == Status::Inconclusive) {
            2
        } else {
            0
        }
    }

    pub fn machine_block(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable report");
        let obj = v.as_object_mut().expect("report is an object");
        obj.insert("digest".into(), Value::String(self.digest()));
        obj.insert("timing_ms".into(), Value::from(self.timing_ms as u64));
        v
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(d) = &self.input_digest {
            let _ = writeln!(out, "input sha256: {d}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for s in &self.summary {
            let _ = writeln!(out, "{s}");
        }
        out.push_str("verdicts:\n");
        for v in &self.verdicts {
            let _ = writeln!(out, "  [{}] {}: {}", v.status.tag(), v.claim, v.detail);
        }
        if !self.counts.is_empty() {
            out.push_str("counts:\n");
            for (k, v) in &self.counts {
                let _ = writeln!(out, "  {k} = {v}");
            }
        }
        if !self.certificates.is_empty() {
            out.push_str("certificates:\n");
            for (k, v) in &self.certificates {
                match v {
                    Value::String(s) => {
                        let _ = writeln!(out, "  {k}:");
                        for l in s.lines() {
                            let _ = writeln!(out, "    {l}");
                        }
                    }
                    Value::Array(items) if items.iter().all(Value::is_string) => {
                        let _ = writeln!(out, "  {k}:");
                        for item in items {
                            let _ = writeln!(out, "    {}", item.as_str().unwrap_or_default());
                        }
                    }
                    other => {
                        let _ = writeln!(out, "  {k}: {other}");
                    }
                }
            }
        }
        let _ = writeln!(out, "digest: {}", self.digest());
        let _ = writeln!(out, "timing: {} ms", self.timing_ms);
        out.push_str("--- machine-readable ---\n");
        out.push_str(&serde_json::to_string_pretty(&self.machine_block()).expect("serializable report"));
        out.push('\n');
        out
    }
}
