//! Outcome of a randomized or exhaustive property check.

use serde::Serialize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Records one check; `detail` is only built on failure.
    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.failures
            .extend(other.failures.into_iter().map(|f| format!("{}: {f}", other.name)));
    }
}
