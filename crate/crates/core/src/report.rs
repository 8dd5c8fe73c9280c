//! Outcomes of property checks.

use serde::Serialize;

use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    /// Name of the violated identity.
    pub identity: String,
    #[serde(skip)]
    pub witness: Vec<Word>,
    /// The witness words as text, in the spec's letter names.
    #[serde(rename = "witness")]
    pub witness_text: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    /// Length bound the check ran with, if any.
    pub bound: Option<usize>,
    pub verdict: Verdict,
    pub failure: Option<Failure>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>, bound: Option<usize>) -> Self {
        CheckReport {
            check: check.into(),
            bound,
            verdict: Verdict::Pass,
            failure: None,
            notes: Vec::new(),
        }
    }

    pub fn fail(check: impl Into<String>, bound: Option<usize>, failure: Failure) -> Self {
        CheckReport {
            check: check.into(),
            bound,
            verdict: Verdict::Fail,
            failure: Some(failure),
            notes: Vec::new(),
        }
    }

    pub fn from_outcome(check: impl Into<String>, bound: Option<usize>, outcome: Option<Failure>) -> Self {
        match outcome {
            None => Self::pass(check, bound),
            Some(f) => Self::fail(check, bound, f),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = self.check.clone();
        if let Some(n) = self.bound {
            out.push_str(&format!(" (N={n})"));
        }
        out.push_str(match self.verdict {
            Verdict::Pass => ": PASS",
            Verdict::Fail => ": FAIL",
        });
        if let Some(f) = &self.failure {
            out.push_str(&format!("\n  identity: {}", f.identity));
            if !f.witness_text.is_empty() {
                out.push_str(&format!("\n  witness: {}", f.witness_text.join(", ")));
            }
            out.push_str(&format!("\n  lhs: {}\n  rhs: {}", f.lhs, f.rhs));
        }
        for note in &self.notes {
            out.push_str(&format!("\n  note: {note}"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Failure {
    pub fn new(
        identity: impl Into<String>,
        witness: Vec<Word>,
        witness_text: Vec<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
    ) -> Self {
        Failure {
            identity: identity.into(),
            witness,
            witness_text,
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render_text())
    }
}
