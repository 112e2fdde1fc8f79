//! Machine-readable outcome of a verification sweep.

use serde::{Deserialize, Serialize};

/// Result of one verification suite or sub-check. Suites aggregate these and
/// the CLI serializes them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    /// Number of individual assertions evaluated.
    pub checked: u64,
    /// First counterexample, if any.
    pub counterexample: Option<String>,
    pub details: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            pass: true,
            checked: 0,
            counterexample: None,
            details: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.counterexample = Some(describe());
        }
    }

    pub fn note(&mut self, detail: impl Into<String>) {
        self.details.push(detail.into());
    }

    /// Folds a sub-report into this one.
    pub fn absorb(&mut self, sub: Report) {
        self.checked += sub.checked;
        if !sub.pass && self.pass {
            self.pass = false;
            self.counterexample = sub
                .counterexample
                .map(|c| format!("{}: {c}", sub.name));
        }
        self.details.extend(sub.details);
    }
}
