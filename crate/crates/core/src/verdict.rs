//! Three-valued check results.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    Holds,
    Unknown,
    Fails,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::Unknown => "Unknown",
        })
    }
}

/// Outcome of a check. A failing verdict always carries at least one
/// witness line; an unknown verdict always carries a reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub method: String,
    pub witness: Vec<String>,
    pub reason: Option<String>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn holds(method: impl Into<String>) -> Self {
        Verdict { status: Status::Holds, method: method.into(), witness: Vec::new(), reason: None, notes: Vec::new() }
    }

    pub fn fails(method: impl Into<String>, witness: impl Into<String>) -> Self {
        let w = witness.into();
        let w = if w.is_empty() { "unspecified obstruction".to_string() } else { w };
        Verdict { status: Status::Fails, method: method.into(), witness: vec![w], reason: None, notes: Vec::new() }
    }

    pub fn unknown(method: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict {
            status: Status::Unknown,
            method: method.into(),
            witness: Vec::new(),
            reason: Some(reason.into()),
            notes: Vec::new(),
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_unknown(&self) -> bool {
        self.status == Status::Unknown
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness.push(w.into());
        self
    }

    /// Prefixes every witness line, used when lifting a sub-check into a
    /// larger one.
    pub fn context(mut self, ctx: &str) -> Self {
        for w in &mut self.witness {
            *w = format!("{ctx}: {w}");
        }
        if let Some(r) = &mut self.reason {
            *r = format!("{ctx}: {r}");
        }
        self
    }

    /// Conjunction over sub-verdicts: any failure wins, then any unknown.
    /// Failing witnesses are all kept, in order.
    pub fn all(method: impl Into<String>, parts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let method = method.into();
        let mut witness = Vec::new();
        let mut reason = None;
        let mut status = Status::Holds;
        let mut notes = Vec::new();
        for p in parts {
            match p.status {
                Status::Fails => {
                    status = Status::Fails;
                    witness.extend(p.witness);
                }
                Status::Unknown => {
                    if status == Status::Holds {
                        status = Status::Unknown;
                    }
                    if reason.is_none() {
                        reason = p.reason;
                    }
                }
                Status::Holds => {}
            }
            notes.extend(p.notes);
        }
        notes.sort();
        notes.dedup();
        Verdict { status, method, witness, reason, notes }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.status, self.method)?;
        if let Some(w) = self.witness.first() {
            write!(f, " witness: {w}")?;
        }
        if let Some(r) = &self.reason {
            write!(f, " reason: {r}")?;
        }
        Ok(())
    }
}
