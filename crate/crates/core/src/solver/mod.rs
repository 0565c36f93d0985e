//! Test selection: a test is valid when every atom of its conjunction holds.

mod kb;
mod select;

use assay_stats::TestKind;
use serde::{Deserialize, Serialize};

use crate::properties::{Atom, PropertyError, PropertyValue, ResolvedAtom};

pub use kb::{build_knowledge_base, knowledge_base_json, Family, TestRequirement};
pub use select::{reconcile_assumptions, select_tests, select_with};

/// One decided atom, kept as justification for a valid test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomEvidence {
    pub atom: Atom,
    pub text: String,
    pub value: PropertyValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidTest {
    pub test: TestKind,
    pub family: Family,
    pub power_rank: u32,
    pub evidence: Vec<AtomEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum InvalidReason {
    /// First atom of the conjunction that does not hold.
    FailedAtom { atom: Atom, text: String, value: PropertyValue },
    /// The atom could not be decided, e.g. too few observations.
    EvaluationError { atom: Atom, text: String, error: PropertyError },
    /// Fallback test, skipped because another test applies.
    FallbackNotNeeded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvalidTest {
    pub test: TestKind,
    pub family: Family,
    pub reason: InvalidReason,
}

/// A claim the data contradicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConflictWarning {
    pub property: ResolvedAtom,
    pub assumed: bool,
    pub computed: PropertyValue,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    /// Valid tests in knowledge-base order.
    pub valid: Vec<ValidTest>,
    pub invalid: Vec<InvalidTest>,
    pub warnings: Vec<ConflictWarning>,
    /// Set when only the fallback test applies.
    pub fallback: bool,
}

impl SelectionOutcome {
    pub fn is_valid(&self, test: TestKind) -> bool {
        self.valid.iter().any(|v| v.test == test)
    }

    pub fn valid_tests(&self) -> Vec<TestKind> {
        self.valid.iter().map(|v| v.test).collect()
    }
}
