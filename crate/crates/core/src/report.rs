//! Pass/fail bookkeeping shared by every verification routine.

use serde::Serialize;

/// Maximum number of counterexamples kept per check.
const MAX_FAILURES: usize = 5;

/// Outcome of a hard check: an identity that must hold exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failed: usize,
    pub counterexamples: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), passed: true, checked: 0, failed: 0, counterexamples: Vec::new() }
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.failed += 1;
            if self.counterexamples.len() < MAX_FAILURES {
                self.counterexamples.push(describe());
            }
        }
    }

    /// Folds another report's counts into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        self.passed &= other.passed;
        for c in other.counterexamples {
            if self.counterexamples.len() < MAX_FAILURES {
                self.counterexamples.push(format!("{}: {c}", other.name));
            }
        }
    }

    pub fn merged(name: impl Into<String>, parts: impl IntoIterator<Item = CheckReport>) -> Self {
        let mut out = Self::new(name);
        for p in parts {
            out.absorb(p);
        }
        out
    }
}
