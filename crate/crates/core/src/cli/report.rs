//! Deterministic reports and exit codes.

use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::verdict::{Status, Verdict};

pub const TOOL: &str = "algpat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status for malformed input.
pub const EXIT_INPUT: i32 = 3;
/// Exit status when the report cannot be written.
pub const EXIT_IO: i32 = 4;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub method: String,
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub notes: Vec<String>,
    /// only with `--timing`, which gives up byte-determinism
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    /// 0 when everything holds, 1 on any failure, 2 when something is
    /// undecided and nothing fails.
    pub fn exit_code(&self) -> i32 {
        match self.checks.iter().map(|c| c.status).max() {
            None | Some(Status::Holds) => 0,
            Some(Status::Fails) => 1,
            Some(Status::Unknown) => 2,
        }
    }

    pub fn find(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} digest {}\n", self.tool, self.version, self.command, self.input_digest);
        for c in &self.checks {
            s.push_str(&format!("{:<7} {} [{}]\n", c.status.to_string(), c.name, c.method));
            for w in &c.witness {
                s.push_str(&format!("        witness: {w}\n"));
            }
            if let Some(r) = &c.reason {
                s.push_str(&format!("        reason: {r}\n"));
            }
            for n in &c.notes {
                s.push_str(&format!("        note: {n}\n"));
            }
            if let Some(t) = c.timing_ms {
                s.push_str(&format!("        time: {t} ms\n"));
            }
        }
        s
    }
}

pub fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects checks in declaration order.
pub struct Recorder {
    pub checks: Vec<CheckRecord>,
    timing: bool,
}

impl Recorder {
    pub fn new(timing: bool) -> Self {
        Recorder { checks: Vec::new(), timing }
    }

    pub fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Verdict) -> Verdict {
        let t = Instant::now();
        let v = f();
        let ms = t.elapsed().as_millis() as u64;
        self.push_timed(name, v.clone(), Some(ms));
        v
    }

    pub fn push(&mut self, name: impl Into<String>, v: Verdict) {
        self.push_timed(name, v, None);
    }

    fn push_timed(&mut self, name: impl Into<String>, v: Verdict, ms: Option<u64>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            status: v.status,
            method: v.method,
            witness: v.witness,
            reason: v.reason,
            notes: v.notes,
            timing_ms: if self.timing { ms } else { None },
        });
    }
}

/// Holds when two routes reach the same decision.
pub fn agreement(name: &str, a: &Verdict, b: &Verdict) -> Verdict {
    const M: &str = "both routes reach the same verdict";
    if a.is_unknown() || b.is_unknown() {
        Verdict::unknown(M, format!("{name}: undecided route ({} vs {})", a.status, b.status))
    } else if a.status == b.status {
        Verdict::holds(M).with_note(format!("{name}: both {}", a.status))
    } else {
        Verdict::fails(M, format!("{name}: {a} vs {b}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_worst_status() {
        let mut r = Recorder::new(false);
        r.push("a", Verdict::holds("m"));
        let mut rep = Report { tool: TOOL, version: VERSION, command: "x".into(), input_digest: String::new(), checks: r.checks };
        assert_eq!(rep.exit_code(), 0);
        rep.checks.push(rep.checks[0].clone());
        rep.checks[1].status = Status::Unknown;
        assert_eq!(rep.exit_code(), 2);
        rep.checks[0].status = Status::Fails;
        assert_eq!(rep.exit_code(), 1);
    }

    #[test]
    fn digest_separates_parts() {
        assert_ne!(digest(&["ab", "c"]), digest(&["a", "bc"]));
        assert_eq!(digest(&["x"]).len(), 64);
    }
}
