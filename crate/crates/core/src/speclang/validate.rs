use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::SpecError;

/// Role a declared variable plays in the design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarRole {
    Independent,
    Dependent,
    Covariate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidatedSpec {
    pub spec: AnalysisSpec,
    pub roles: BTreeMap<String, VarRole>,
    pub warnings: Vec<String>,
}

impl ValidatedSpec {
    pub fn alpha(&self) -> f64 {
        self.spec.assumptions.alpha
    }

    pub fn variable(&self, name: &str) -> Option<&VariableDecl> {
        self.spec.variable(name)
    }

    pub fn is_within(&self, name: &str) -> bool {
        self.spec.design.within_subjects.iter().any(|w| w == name)
    }

    /// Role label in the vocabulary of the study type.
    pub fn role_label(&self, name: &str) -> Option<&'static str> {
        let (ind, dep) = self.spec.design.study_type.role_labels();
        self.roles.get(name).map(|r| match r {
            VarRole::Independent => ind,
            VarRole::Dependent => dep,
            VarRole::Covariate => "co-variate",
        })
    }
}

impl fmt::Display for VarRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarRole::Independent => "independent",
            VarRole::Dependent => "dependent",
            VarRole::Covariate => "co-variate",
        })
    }
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::InvalidDeclaration(msg.into())
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '.'))
}

fn check_variable(v: &VariableDecl) -> Result<(), SpecError> {
    if !is_identifier(&v.name) {
        return Err(invalid(format!("`{}` is not a valid variable name", v.name)));
    }
    if v.dtype.is_categorical() {
        if v.categories.is_empty() {
            return Err(invalid(format!("{} variable `{}` needs categories", v.dtype, v.name)));
        }
        for (i, c) in v.categories.iter().enumerate() {
            if v.categories[..i].contains(c) {
                return Err(invalid(format!("category `{c}` repeated in `{}`", v.name)));
            }
        }
        if v.range.is_some() {
            return Err(invalid(format!("{} variable `{}` cannot have a range", v.dtype, v.name)));
        }
    } else {
        if !v.categories.is_empty() {
            return Err(invalid(format!("{} variable `{}` cannot have categories", v.dtype, v.name)));
        }
        if let Some(r) = v.range {
            if !(r.lo.is_finite() && r.hi.is_finite() && r.lo <= r.hi) {
                return Err(invalid(format!("range of `{}` must satisfy lo <= hi", v.name)));
            }
        }
    }
    Ok(())
}

/// Cross-checks every reference and resolves variable roles.
pub fn validate_spec(spec: AnalysisSpec) -> Result<ValidatedSpec, SpecError> {
    for (i, v) in spec.variables.iter().enumerate() {
        if spec.variables[..i].iter().any(|w| w.name == v.name) {
            return Err(SpecError::DuplicateVariable(v.name.clone()));
        }
        check_variable(v)?;
    }
    let declared = |name: &str| spec.variable(name).ok_or_else(|| SpecError::UnknownVariable(name.to_string()));

    let d = &spec.design;
    for name in d.independent.iter().chain(&d.dependent).chain(&d.within_subjects) {
        declared(name)?;
    }
    if let Some(name) = d.independent.iter().find(|n| d.dependent.contains(n)) {
        return Err(SpecError::RoleConflict(name.clone()));
    }
    for list in [&d.independent, &d.dependent] {
        for (i, n) in list.iter().enumerate() {
            if list[..i].contains(n) {
                return Err(invalid(format!("`{n}` listed twice in the design")));
            }
        }
    }
    if d.independent.is_empty() {
        return Err(invalid("design names no independent variable"));
    }
    if d.dependent.is_empty() {
        return Err(invalid("design names no dependent variable"));
    }
    if let Some(w) = d.within_subjects.iter().find(|w| !d.independent.contains(w)) {
        return Err(invalid(format!("within-subjects variable `{w}` is not independent")));
    }
    if !d.within_subjects.is_empty() && d.key.is_none() {
        return Err(SpecError::WithinWithoutKey);
    }
    if let Some(k) = &d.key {
        if k.is_empty() {
            return Err(invalid("key column name is empty"));
        }
        if d.independent.contains(k) || d.dependent.contains(k) {
            return Err(SpecError::RoleConflict(k.clone()));
        }
    }

    let a = &spec.assumptions;
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(SpecError::InvalidAlpha(a.alpha));
    }
    for c in &a.claims {
        let v = declared(&c.variable)?;
        if c.property == ClaimKind::Normality && !v.dtype.is_continuous() {
            return Err(invalid(format!("normality claimed for {} variable `{}`", v.dtype, v.name)));
        }
        if c.property == ClaimKind::EqualVariance && c.groups.is_empty() {
            return Err(invalid(format!("equal_variance({}) needs a grouping variable", c.variable)));
        }
        for g in &c.groups {
            if !declared(g)?.dtype.is_categorical() {
                return Err(invalid(format!("claim groups `{}` by non-categorical `{g}`", c.variable)));
            }
        }
    }

    match &spec.hypothesis {
        HypothesisDecl::GroupComparison { dependent, independent, left, right, .. } => {
            declared(dependent)?;
            let ind = declared(independent)?;
            if !ind.dtype.is_categorical() {
                return Err(SpecError::UnsupportedForm(format!("`{independent}` has no categories to compare")));
            }
            for cat in [left, right] {
                if ind.category_index(cat).is_none() {
                    return Err(SpecError::UnknownCategory { variable: independent.clone(), category: cat.clone() });
                }
            }
            if left == right || dependent == independent {
                return Err(SpecError::UnsupportedForm("comparison of a group with itself".into()));
            }
            if !d.dependent.contains(dependent) {
                return Err(invalid(format!("hypothesis outcome `{dependent}` is not a design dependent")));
            }
            if !d.independent.contains(independent) {
                return Err(invalid(format!("hypothesis groups `{independent}` is not a design independent")));
            }
        }
        HypothesisDecl::LinearRelationship { x, y, .. } => {
            declared(x)?;
            declared(y)?;
            if x == y {
                return Err(SpecError::UnsupportedForm(format!("`{x}` related to itself")));
            }
        }
    }

    let mut roles = BTreeMap::new();
    let mut warnings = Vec::new();
    for v in &spec.variables {
        let role = if d.independent.contains(&v.name) {
            VarRole::Independent
        } else if d.dependent.contains(&v.name) {
            VarRole::Dependent
        } else {
            if d.key.as_deref() != Some(v.name.as_str()) {
                warnings.push(format!("variable `{}` has no role in the design and is ignored", v.name));
            }
            VarRole::Covariate
        };
        roles.insert(v.name.clone(), role);
    }
    if let HypothesisDecl::LinearRelationship { x, y, .. } = &spec.hypothesis {
        for v in [x, y] {
            if roles.get(v) == Some(&VarRole::Covariate) {
                warnings.push(format!("hypothesis variable `{v}` has no role in the design"));
            }
        }
    }
    Ok(ValidatedSpec { spec, roles, warnings })
}
