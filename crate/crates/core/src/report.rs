//! Structured validation reports: a flat list of named checks, each passing
//! or failing with a witness string. Reports are deterministic given the
//! structure and seed that produced them.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> CheckReport {
        CheckReport { checks: Vec::new() }
    }

    pub fn ok(&mut self, name: &str) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: true,
            witness: None,
        });
    }

    pub fn fail(&mut self, name: &str, witness: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: false,
            witness: Some(witness),
        });
    }

    /// Record a named check: pass if `witness` is None, fail otherwise.
    pub fn record(&mut self, name: &str, witness: Option<String>) {
        match witness {
            None => self.ok(name),
            Some(w) => self.fail(name, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match (&c.passed, &c.witness) {
                (true, _) => writeln!(f, "  [pass] {}", c.name)?,
                (false, Some(w)) => writeln!(f, "  [FAIL] {}: {}", c.name, w)?,
                (false, None) => writeln!(f, "  [FAIL] {}", c.name)?,
            }
        }
        Ok(())
    }
}
