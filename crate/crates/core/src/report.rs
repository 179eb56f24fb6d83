//! Report-style results shared by all validators.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One failed check. `rule` is a short stable identifier (e.g. `"cocycle"`),
/// `location` names the offending item, `detail` is human readable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub location: String,
    pub detail: String,
}

/// Outcome of a validator. Passes iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub subject: String,
    /// Number of individual equation instances evaluated, per rule.
    pub checked: Vec<(String, usize)>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport { subject: subject.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: &str, location: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            rule: rule.to_string(),
            location: location.into(),
            detail: detail.into(),
        });
    }

    pub fn count(&mut self, rule: &str, n: usize) {
        match self.checked.iter_mut().find(|(r, _)| r == rule) {
            Some((_, c)) => *c += n,
            None => self.checked.push((rule.to_string(), n)),
        }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Appends another report's findings, prefixing locations with its subject.
    pub fn absorb(&mut self, other: ValidationReport) {
        for (rule, n) in other.checked {
            self.count(&rule, n);
        }
        for v in other.violations {
            self.violations.push(Violation {
                location: format!("{}: {}", other.subject, v.location),
                ..v
            });
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: ok", self.subject)?;
        } else {
            write!(f, "{}: {} violation(s)", self.subject, self.violations.len())?;
        }
        for v in &self.violations {
            write!(f, "\n  [{}] {}: {}", v.rule, v.location, v.detail)?;
        }
        Ok(())
    }
}
