use std::fmt;

use serde::{Deserialize, Serialize};

/// Measurement level of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DType {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
}

impl DType {
    pub fn keyword(self) -> &'static str {
        match self {
            DType::Nominal => "nominal",
            DType::Ordinal => "ordinal",
            DType::Interval => "interval",
            DType::Ratio => "ratio",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "nominal" => Some(DType::Nominal),
            "ordinal" => Some(DType::Ordinal),
            "interval" => Some(DType::Interval),
            "ratio" => Some(DType::Ratio),
            _ => None,
        }
    }

    pub fn is_categorical(self) -> bool {
        matches!(self, DType::Nominal | DType::Ordinal)
    }

    pub fn is_continuous(self) -> bool {
        matches!(self, DType::Interval | DType::Ratio)
    }
}

impl fmt::Display for DType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableDecl {
    pub name: String,
    pub dtype: DType,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
}

impl VariableDecl {
    pub fn category_index(&self, label: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyType {
    Observational,
    Experiment,
}

impl StudyType {
    pub fn keyword(self) -> &'static str {
        match self {
            StudyType::Observational => "observational",
            StudyType::Experiment => "experiment",
        }
    }

    /// Role labels used in the text format: (independent, dependent).
    pub fn role_labels(self) -> (&'static str, &'static str) {
        match self {
            StudyType::Observational => ("contributor", "outcome"),
            StudyType::Experiment => ("independent", "dependent"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyDesignDecl {
    pub study_type: StudyType,
    pub independent: Vec<String>,
    pub dependent: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub within_subjects: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Normality,
    EqualVariance,
}

impl ClaimKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ClaimKind::Normality => "normality",
            ClaimKind::EqualVariance => "equal_variance",
        }
    }
}

/// A user assertion such as `normality(Prob | So) = true`.
///
/// `groups` empty means the claim is about the variable as a whole; an
/// unconditional normality claim also covers every grouping of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub property: ClaimKind,
    pub variable: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<String>,
    pub holds: bool,
}

pub const DEFAULT_ALPHA: f64 = 0.05;

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionSet {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub claims: Vec<Claim>,
}

impl Default for AssumptionSet {
    fn default() -> Self {
        Self { alpha: DEFAULT_ALPHA, claims: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "!=")]
    NotEqual,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Greater => ">",
            Relation::Less => "<",
            Relation::NotEqual => "!=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Nonzero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum HypothesisDecl {
    GroupComparison { dependent: String, independent: String, left: String, right: String, relation: Relation },
    LinearRelationship { x: String, y: String, sign: Sign },
}

impl HypothesisDecl {
    pub fn is_two_sided(&self) -> bool {
        matches!(
            self,
            HypothesisDecl::GroupComparison { relation: Relation::NotEqual, .. }
                | HypothesisDecl::LinearRelationship { sign: Sign::Nonzero, .. }
        )
    }

    /// Variables named by the hypothesis, in order of appearance.
    pub fn variables(&self) -> Vec<&str> {
        match self {
            HypothesisDecl::GroupComparison { dependent, independent, .. } => vec![dependent, independent],
            HypothesisDecl::LinearRelationship { x, y, .. } => vec![x, y],
        }
    }
}

impl fmt::Display for HypothesisDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisDecl::GroupComparison { dependent, independent, left, right, relation } => write!(
                f,
                "{dependent}: {independent}:{} {} {independent}:{}",
                quote_if_needed(left),
                relation.symbol(),
                quote_if_needed(right)
            ),
            HypothesisDecl::LinearRelationship { x, y, sign } => {
                let s = match sign {
                    Sign::Positive => "+",
                    Sign::Negative => "-",
                    Sign::Nonzero => "",
                };
                write!(f, "{x} ~ {s}{y}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataDecl {
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSpec {
    pub data: DataDecl,
    pub variables: Vec<VariableDecl>,
    pub design: StudyDesignDecl,
    #[serde(default)]
    pub assumptions: AssumptionSet,
    pub hypothesis: HypothesisDecl,
}

impl AnalysisSpec {
    pub fn variable(&self, name: &str) -> Option<&VariableDecl> {
        self.variables.iter().find(|v| v.name == name)
    }
}

/// Characters allowed in an unquoted category label or path.
pub(crate) fn is_bare_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | '+' | '/')
}

pub(crate) fn quote_if_needed(s: &str) -> String {
    if !s.is_empty() && s.chars().all(is_bare_char) && !s.starts_with(['+', '-']) {
        s.to_string()
    } else {
        let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}
