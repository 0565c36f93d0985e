//! Precondition atoms and their evaluation.
//!
//! An [`Atom`] names a property over variable roles (outcome, factor, ...).
//! Binding the roles to the variables of a spec yields a resolved atom,
//! which is what gets evaluated and memoized.

mod evaluate;
mod levene;
mod normality;

use std::fmt;

use assay_stats::StatsError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::DataError;

pub use evaluate::{AtomEvaluator, Bindings, CacheEntry, PropertyCache, PropertyEvaluator};
pub use levene::{levene_test, Center};
pub use normality::shapiro_wilk;

/// Variable roles atoms are written over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Dependent variable of a group comparison.
    Outcome,
    /// Grouping variable of a group comparison.
    Factor,
    /// Every independent variable of the design, hypothesis factor first.
    Design,
    /// First variable of a linear relationship (the continuous one when mixed).
    X,
    /// Second variable of a linear relationship.
    Y,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Outcome => "outcome",
            Role::Factor => "factor",
            Role::Design => "design",
            Role::X => "x",
            Role::Y => "y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Count {
    Exactly(usize),
    AtLeast(usize),
}

impl Count {
    pub fn admits(self, n: usize) -> bool {
        match self {
            Count::Exactly(k) => n == k,
            Count::AtLeast(k) => n >= k,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exactly(k) => write!(f, "{k}"),
            Count::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// Data type classes; continuous covers interval and ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DClass {
    Continuous,
    Categorical,
    Ordinal,
}

impl fmt::Display for DClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DClass::Continuous => "continuous",
            DClass::Categorical => "categorical",
            DClass::Ordinal => "ordinal",
        })
    }
}

/// A precondition over arguments `R`: roles in the knowledge base, variable
/// name lists once resolved against a spec.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "atom", rename_all = "snake_case")]
pub enum Atom<R = Role> {
    VariableCount {
        count: Count,
        roles: Vec<R>,
    },
    /// Every variable in the role belongs to one of `classes`.
    DTypeIs {
        classes: Vec<DClass>,
        role: R,
    },
    Normality {
        role: R,
        given: Option<R>,
    },
    EqualVariance {
        role: R,
        given: R,
    },
    IndependentObservations {
        role: R,
    },
    DependentObservations {
        role: R,
    },
    GroupCount {
        count: Count,
        role: R,
    },
}

pub type ResolvedAtom = Atom<Vec<String>>;

impl<R> Atom<R> {
    /// Precondition code in the nine-code vocabulary: 1-3 variable counts,
    /// 4 data types, 5 normality, 6 equal variance, 7 dependence of
    /// observations, 8-9 group counts.
    pub fn code(&self) -> u8 {
        match self {
            Atom::VariableCount { count: Count::Exactly(1), .. } => 1,
            Atom::VariableCount { count: Count::Exactly(_), .. } => 2,
            Atom::VariableCount { count: Count::AtLeast(_), .. } => 3,
            Atom::DTypeIs { .. } => 4,
            Atom::Normality { .. } => 5,
            Atom::EqualVariance { .. } => 6,
            Atom::IndependentObservations { .. } | Atom::DependentObservations { .. } => 7,
            Atom::GroupCount { count: Count::Exactly(_), .. } => 8,
            Atom::GroupCount { count: Count::AtLeast(_), .. } => 9,
        }
    }

    /// Whether deciding the atom needs sample values.
    pub fn is_statistical(&self) -> bool {
        matches!(self, Atom::Normality { .. } | Atom::EqualVariance { .. })
    }

    pub fn map<S>(&self, mut f: impl FnMut(&R) -> S) -> Atom<S> {
        match self {
            Atom::VariableCount { count, roles } => {
                Atom::VariableCount { count: *count, roles: roles.iter().map(&mut f).collect() }
            }
            Atom::DTypeIs { classes, role } => Atom::DTypeIs { classes: classes.clone(), role: f(role) },
            Atom::Normality { role, given } => {
                let role = f(role);
                Atom::Normality { role, given: given.as_ref().map(f) }
            }
            Atom::EqualVariance { role, given } => {
                let role = f(role);
                Atom::EqualVariance { role, given: f(given) }
            }
            Atom::IndependentObservations { role } => Atom::IndependentObservations { role: f(role) },
            Atom::DependentObservations { role } => Atom::DependentObservations { role: f(role) },
            Atom::GroupCount { count, role } => Atom::GroupCount { count: *count, role: f(role) },
        }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, arg: impl Fn(&R) -> String) -> fmt::Result {
        match self {
            Atom::VariableCount { count, roles } => {
                let names: Vec<String> = roles.iter().map(arg).collect();
                write!(f, "variables({}) = {count}", names.join(", "))
            }
            Atom::DTypeIs { classes, role } => {
                let cs: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
                write!(f, "dtype({}) in {{{}}}", arg(role), cs.join(", "))
            }
            Atom::Normality { role, given: None } => write!(f, "normality({})", arg(role)),
            Atom::Normality { role, given: Some(g) } => write!(f, "normality({} | {})", arg(role), arg(g)),
            Atom::EqualVariance { role, given } => write!(f, "equal_variance({} | {})", arg(role), arg(given)),
            Atom::IndependentObservations { role } => write!(f, "independent_observations({})", arg(role)),
            Atom::DependentObservations { role } => write!(f, "dependent_observations({})", arg(role)),
            Atom::GroupCount { count, role } => write!(f, "groups({}) = {count}", arg(role)),
        }
    }
}

impl fmt::Display for Atom<Role> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, Role::to_string)
    }
}

impl fmt::Display for Atom<Vec<String>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, |names| if names.is_empty() { "-".to_string() } else { names.join(", ") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Taken from a user claim.
    Assumed,
    /// Decided by a statistical check on the data.
    Computed,
    /// Decided from declarations alone.
    Structural,
}

/// One run of a statistical check on one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEvidence {
    pub check: String,
    /// Group the check ran on, absent for a whole-sample or across-group check.
    pub group: Option<String>,
    pub n: usize,
    #[serde(with = "assay_stats::float")]
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyValue {
    pub holds: bool,
    pub provenance: Provenance,
    pub evidence: Vec<CheckEvidence>,
    pub detail: String,
}

impl PropertyValue {
    pub fn structural(holds: bool, detail: impl Into<String>) -> Self {
        Self { holds, provenance: Provenance::Structural, evidence: Vec::new(), detail: detail.into() }
    }

    pub fn assumed(holds: bool, detail: impl Into<String>) -> Self {
        Self { holds, provenance: Provenance::Assumed, evidence: Vec::new(), detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum PropertyError {
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Stats(String),
}

impl From<DataError> for PropertyError {
    fn from(e: DataError) -> Self {
        PropertyError::Data(e.to_string())
    }
}

impl From<StatsError> for PropertyError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::InsufficientData { needed, got } => PropertyError::InsufficientData { needed, got },
            other => PropertyError::Stats(other.to_string()),
        }
    }
}
