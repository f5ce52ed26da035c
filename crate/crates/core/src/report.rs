//! Check outcomes and reports shared by every checker.

use serde::Serialize;
use serde_json::Value;

/// How many witnesses a single check keeps; failures beyond this are only counted.
pub const WITNESS_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub instances: u64,
    pub failures: u64,
    pub witnesses: Vec<Value>,
}

impl CheckOutcome {
    pub fn new(check: impl Into<String>) -> Self {
        CheckOutcome {
            check: check.into(),
            instances: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn tick(&mut self) {
        self.instances += 1;
    }

    pub fn tick_n(&mut self, n: u64) {
        self.instances += n;
    }

    /// Records a failure; the witness is only built while under the cap.
    pub fn fail_with(&mut self, witness: impl FnOnce() -> Value) {
        self.failures += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness());
        }
    }

    /// Records a failure whose witness must be kept even past the cap.
    pub fn fail_pinned(&mut self, witness: Value) {
        self.failures += 1;
        self.witnesses.push(witness);
    }

    /// Instance check: ticks, and records a failure when `ok` is false.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        self.tick();
        if !ok {
            self.fail_with(witness);
        }
        ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bounds {
    pub site_bound: usize,
    pub arity_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub subject: String,
    pub bounds: Bounds,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(subject: impl Into<String>, site_bound: usize, arity_bound: usize) -> Self {
        Report {
            subject: subject.into(),
            bounds: Bounds {
                site_bound,
                arity_bound,
            },
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn push(&mut self, outcome: CheckOutcome) {
        self.checks.push(outcome);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Value> {
        self.checks.iter().flat_map(|c| c.witnesses.iter())
    }
}
