use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::dataset::{DataError, Dataset};
use crate::speclang::{Claim, ClaimKind, DType, HypothesisDecl, ValidatedSpec};

use super::{
    levene_test, shapiro_wilk, Atom, Center, CheckEvidence, DClass, PropertyError, PropertyValue, ResolvedAtom, Role,
};

/// Anything that can decide an atom. The solver only sees this trait.
pub trait AtomEvaluator {
    fn evaluate(&self, atom: &Atom) -> Result<PropertyValue, PropertyError>;

    /// Human-readable form of the atom as the evaluator sees it.
    fn describe(&self, atom: &Atom) -> String {
        atom.to_string()
    }
}

/// Variables bound to each role by the hypothesis and the design.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    pub outcome: Vec<String>,
    pub factor: Vec<String>,
    pub design: Vec<String>,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl Bindings {
    /// Group comparisons bind outcome, factor and design; linear
    /// relationships bind x and y, with the continuous variable as x when
    /// exactly one of them is categorical.
    pub fn from_spec(spec: &ValidatedSpec) -> Self {
        match &spec.spec.hypothesis {
            HypothesisDecl::GroupComparison { dependent, independent, .. } => {
                let mut design = vec![independent.clone()];
                design.extend(spec.spec.design.independent.iter().filter(|v| *v != independent).cloned());
                Bindings {
                    outcome: vec![dependent.clone()],
                    factor: vec![independent.clone()],
                    design,
                    ..Default::default()
                }
            }
            HypothesisDecl::LinearRelationship { x, y, .. } => {
                let categorical = |v: &str| spec.variable(v).is_some_and(|d| d.dtype.is_categorical());
                let (x, y) = if categorical(x) && !categorical(y) { (y, x) } else { (x, y) };
                Bindings { x: vec![x.clone()], y: vec![y.clone()], ..Default::default() }
            }
        }
    }

    pub fn get(&self, role: Role) -> &[String] {
        match role {
            Role::Outcome => &self.outcome,
            Role::Factor => &self.factor,
            Role::Design => &self.design,
            Role::X => &self.x,
            Role::Y => &self.y,
        }
    }

    pub fn resolve(&self, atom: &Atom) -> ResolvedAtom {
        atom.map(|r| self.get(*r).to_vec())
    }
}

/// Memo entry: the value the solver sees plus, for assumed properties, the
/// value the data gave when it could be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    pub property: ResolvedAtom,
    pub value: Result<PropertyValue, PropertyError>,
    pub computed: Option<PropertyValue>,
}

#[derive(Debug, Default)]
pub struct PropertyCache {
    entries: Mutex<BTreeMap<ResolvedAtom, CacheEntry>>,
    checks: AtomicUsize,
}

impl PropertyCache {
    /// Entries in key order.
    pub fn entries(&self) -> Vec<CacheEntry> {
        self.entries.lock().expect("cache lock").values().cloned().collect()
    }

    /// Statistical checks (Shapiro-Wilk, Levene) run so far.
    pub fn checks_run(&self) -> usize {
        self.checks.load(Ordering::Relaxed)
    }
}

pub struct PropertyEvaluator<'a> {
    spec: &'a ValidatedSpec,
    data: &'a Dataset,
    bindings: Bindings,
    center: Center,
    cache: PropertyCache,
}

fn dtype_in(dtype: DType, class: DClass) -> bool {
    match class {
        DClass::Continuous => dtype.is_continuous(),
        DClass::Categorical => dtype.is_categorical(),
        DClass::Ordinal => dtype == DType::Ordinal,
    }
}

fn unbound() -> PropertyValue {
    PropertyValue::structural(false, "role not bound by the hypothesis")
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
}

impl<'a> PropertyEvaluator<'a> {
    pub fn new(spec: &'a ValidatedSpec, data: &'a Dataset) -> Self {
        Self { spec, data, bindings: Bindings::from_spec(spec), center: Center::Mean, cache: PropertyCache::default() }
    }

    pub fn with_center(mut self, center: Center) -> Self {
        self.center = center;
        self
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn cache(&self) -> &PropertyCache {
        &self.cache
    }

    pub fn evaluate_property(&self, atom: &Atom) -> Result<PropertyValue, PropertyError> {
        let key = self.bindings.resolve(atom);
        let mut entries = self.cache.entries.lock().expect("cache lock");
        if let Some(e) = entries.get(&key) {
            return e.value.clone();
        }
        let entry = self.decide(&key);
        let value = entry.value.clone();
        entries.insert(key, entry);
        value
    }

    fn dtype(&self, name: &str) -> Option<DType> {
        self.spec.variable(name).map(|v| v.dtype)
    }

    fn decide(&self, p: &ResolvedAtom) -> CacheEntry {
        let done = |value: PropertyValue| CacheEntry { property: p.clone(), value: Ok(value), computed: None };
        match p {
            Atom::VariableCount { count, roles } => {
                let names: BTreeSet<&String> = roles.iter().flatten().collect();
                if names.is_empty() {
                    return done(unbound());
                }
                done(PropertyValue::structural(count.admits(names.len()), format!("{} variable(s)", names.len())))
            }
            Atom::DTypeIs { classes, role } => {
                if role.is_empty() {
                    return done(unbound());
                }
                let mut details = Vec::new();
                let mut holds = true;
                for v in role {
                    let Some(t) = self.dtype(v) else {
                        return done(PropertyValue::structural(false, format!("`{v}` undeclared")));
                    };
                    holds &= classes.iter().any(|c| dtype_in(t, *c));
                    details.push(format!("{v} is {t}"));
                }
                done(PropertyValue::structural(holds, details.join(", ")))
            }
            Atom::IndependentObservations { role } => {
                if role.is_empty() {
                    return done(unbound());
                }
                let within: Vec<&String> = role.iter().filter(|v| self.spec.is_within(v)).collect();
                let detail = match within.as_slice() {
                    [] => "between-subjects".to_string(),
                    w => format!(
                        "{} measured within subjects",
                        w.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
                    ),
                };
                done(PropertyValue::structural(within.is_empty(), detail))
            }
            Atom::DependentObservations { role } => {
                if role.is_empty() {
                    return done(unbound());
                }
                let holds = self.spec.spec.design.key.is_some() && role.iter().all(|v| self.spec.is_within(v));
                let detail = if holds { "within-subjects, keyed" } else { "not a keyed within-subjects factor" };
                done(PropertyValue::structural(holds, detail))
            }
            Atom::GroupCount { count, role } => {
                if role.is_empty() {
                    return done(unbound());
                }
                let mut details = Vec::new();
                let mut holds = true;
                for v in role {
                    match self.spec.variable(v) {
                        Some(d) if d.dtype.is_categorical() => {
                            holds &= count.admits(d.categories.len());
                            details.push(format!("{v} has {} categories", d.categories.len()));
                        }
                        _ => {
                            holds = false;
                            details.push(format!("{v} is not categorical"));
                        }
                    }
                }
                done(PropertyValue::structural(holds, details.join(", ")))
            }
            Atom::Normality { role, given } => {
                let given = given.clone();
                if given.as_ref().is_some_and(Vec::is_empty) {
                    return done(unbound());
                }
                self.statistical(p, ClaimKind::Normality, role, &given.unwrap_or_default())
            }
            Atom::EqualVariance { role, given } => {
                if given.is_empty() {
                    return done(unbound());
                }
                self.statistical(p, ClaimKind::EqualVariance, role, given)
            }
        }
    }

    fn statistical(&self, p: &ResolvedAtom, kind: ClaimKind, subject: &[String], given: &[String]) -> CacheEntry {
        let done = |value: PropertyValue| CacheEntry { property: p.clone(), value: Ok(value), computed: None };
        let var = match subject {
            [] => return done(unbound()),
            [v] => v,
            _ => return done(PropertyValue::structural(false, "defined for a single variable")),
        };
        match self.dtype(var) {
            Some(t) if t.is_continuous() => {}
            Some(t) => {
                let why = match kind {
                    ClaimKind::Normality => {
                        format!("only a continuous variable can be normally distributed; {var} is {t}")
                    }
                    ClaimKind::EqualVariance => {
                        format!("variance comparison needs a continuous variable; {var} is {t}")
                    }
                };
                return done(PropertyValue::structural(false, why));
            }
            None => return done(PropertyValue::structural(false, format!("`{var}` undeclared"))),
        }
        if let Some(g) = given.iter().find(|g| !self.dtype(g).is_some_and(DType::is_categorical)) {
            return done(PropertyValue::structural(false, format!("grouping variable {g} is not categorical")));
        }

        match self.claim_for(kind, var, given) {
            Some(claim) => {
                let value = PropertyValue::assumed(claim.holds, describe_claim(claim));
                let computed = self.check(kind, var, given).ok();
                CacheEntry { property: p.clone(), value: Ok(value), computed }
            }
            None => {
                let value = self.check(kind, var, given);
                CacheEntry { property: p.clone(), computed: value.clone().ok(), value }
            }
        }
    }

    /// Exact grouping first; an unconditional normality claim covers every grouping.
    fn claim_for(&self, kind: ClaimKind, var: &str, given: &[String]) -> Option<&'a Claim> {
        let claims = &self.spec.spec.assumptions.claims;
        let matching = |c: &&Claim| c.property == kind && c.variable == var;
        claims
            .iter()
            .filter(matching)
            .find(|c| same_set(&c.groups, given))
            .or_else(|| claims.iter().filter(matching).find(|c| kind == ClaimKind::Normality && c.groups.is_empty()))
    }

    fn groups(&self, var: &str, given: &[String]) -> Result<Vec<(String, Vec<f64>)>, DataError> {
        match given {
            [] => Ok(vec![(var.to_string(), self.data.values(var)?.0)]),
            [f] => {
                let g = self.data.group_samples(var, f)?;
                Ok(g.labels.into_iter().map(|l| format!("{f}={l}")).zip(g.groups).collect())
            }
            many => {
                let names: Vec<&str> = many.iter().map(String::as_str).collect();
                let cells = self.data.cell_samples(var, &names)?;
                let mut by_cell: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
                for (i, y) in cells.y.iter().enumerate() {
                    let key: Vec<usize> = cells.codes.iter().map(|c| c[i]).collect();
                    by_cell.entry(key).or_default().push(*y);
                }
                let mut out = Vec::new();
                let mut key = vec![0usize; many.len()];
                loop {
                    let label: Vec<String> =
                        key.iter().zip(many).zip(&cells.levels).map(|((k, f), l)| format!("{f}={}", l[*k])).collect();
                    let label = label.join(",");
                    match by_cell.remove(&key) {
                        Some(v) => out.push((label, v)),
                        None => return Err(DataError::EmptyGroup(label)),
                    }
                    // odometer over the level combinations
                    let mut d = many.len();
                    loop {
                        if d == 0 {
                            return Ok(out);
                        }
                        d -= 1;
                        key[d] += 1;
                        if key[d] < cells.levels[d].len() {
                            break;
                        }
                        key[d] = 0;
                    }
                }
            }
        }
    }

    fn check(&self, kind: ClaimKind, var: &str, given: &[String]) -> Result<PropertyValue, PropertyError> {
        self.cache.checks.fetch_add(1, Ordering::Relaxed);
        let alpha = self.spec.alpha();
        let groups = self.groups(var, given)?;
        let mut evidence = Vec::new();
        match kind {
            ClaimKind::Normality => {
                for (label, xs) in &groups {
                    let (w, p) = shapiro_wilk(xs)?;
                    let group = if given.is_empty() { None } else { Some(label.clone()) };
                    evidence.push(CheckEvidence {
                        check: "shapiro_wilk".into(),
                        group,
                        n: xs.len(),
                        statistic: w,
                        p_value: p,
                    });
                }
            }
            ClaimKind::EqualVariance => {
                let slices: Vec<&[f64]> = groups.iter().map(|(_, g)| g.as_slice()).collect();
                let (w, p) = levene_test(&slices, self.center)?;
                let n = slices.iter().map(|g| g.len()).sum();
                evidence.push(CheckEvidence { check: "levene".into(), group: None, n, statistic: w, p_value: p });
            }
        }
        let holds = evidence.iter().all(|e| e.p_value > alpha);
        let name = if kind == ClaimKind::Normality { "Shapiro-Wilk" } else { "Levene" };
        let parts: Vec<String> = evidence
            .iter()
            .map(|e| match &e.group {
                Some(g) => format!("p = {:.4} in {g}", e.p_value),
                None => format!("p = {:.4}", e.p_value),
            })
            .collect();
        let detail = format!("{name} {}, alpha = {alpha}", parts.join("; "));
        Ok(PropertyValue { holds, provenance: super::Provenance::Computed, evidence, detail })
    }
}

pub(crate) fn describe_claim(c: &Claim) -> String {
    let groups = if c.groups.is_empty() { String::new() } else { format!(" | {}", c.groups.join(", ")) };
    format!("{}({}{groups}) = {}", c.property.keyword(), c.variable, c.holds)
}

impl AtomEvaluator for PropertyEvaluator<'_> {
    fn evaluate(&self, atom: &Atom) -> Result<PropertyValue, PropertyError> {
        self.evaluate_property(atom)
    }

    fn describe(&self, atom: &Atom) -> String {
        self.bindings.resolve(atom).to_string()
    }
}
