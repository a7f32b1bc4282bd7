//! Validation reports shared by every validator in the crate.

use std::fmt;

use serde::Serialize;

/// Coarse failure class of a violation. The `rule` string on [`Violation`]
/// pins down the exact axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DanglingId,
    MissingComposite,
    AxiomViolation,
    NotAnAction,
    NotIdentityOnObjects,
    NotSurjectiveOnArrows,
    NotSurjective,
    NotInvariant,
    NotPrincipal,
    NotCompatible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub rule: &'static str,
    pub witnesses: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({}): {}", self.kind, self.rule, self.witnesses.join(", "))
    }
}

/// Outcome of a validator: empty means every checked law holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

/// Witness lists are capped per rule so a badly broken table does not
/// produce cubic-size reports.
const MAX_PER_RULE: usize = 32;

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, kind: ViolationKind, rule: &'static str, witnesses: Vec<String>) {
        if self.violations.iter().filter(|v| v.rule == rule).count() < MAX_PER_RULE {
            self.violations.push(Violation { kind, rule, witnesses });
        }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn has_kind(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn extend(&mut self, other: Report) {
        for v in other.violations {
            self.push(v.kind, v.rule, v.witnesses);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
