use assay_stats::TestKind;
use serde::{Deserialize, Serialize};

use crate::properties::{Atom, Count, DClass, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Parametric,
    Nonparametric,
    Proportion,
    Resampling,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Parametric => "parametric",
            Family::Nonparametric => "non-parametric",
            Family::Proportion => "proportion",
            Family::Resampling => "resampling",
        }
    }
}

/// A test and the conjunction of atoms under which it applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRequirement {
    pub test: TestKind,
    pub family: Family,
    pub power_rank: u32,
    pub atoms: Vec<Atom>,
}

use DClass::{Categorical, Continuous, Ordinal};
use Role::{Design, Factor, Outcome, X, Y};

fn two(a: Role, b: Role) -> Atom {
    Atom::VariableCount { count: Count::Exactly(2), roles: vec![a, b] }
}

fn dtype(classes: &[DClass], role: Role) -> Atom {
    Atom::DTypeIs { classes: classes.to_vec(), role }
}

fn groups(count: Count, role: Role) -> Atom {
    Atom::GroupCount { count, role }
}

fn normal(role: Role, given: Option<Role>) -> Atom {
    Atom::Normality { role, given }
}

fn eqvar(role: Role, given: Role) -> Atom {
    Atom::EqualVariance { role, given }
}

fn indep(role: Role) -> Atom {
    Atom::IndependentObservations { role }
}

fn dep(role: Role) -> Atom {
    Atom::DependentObservations { role }
}

const TWO: Count = Count::Exactly(2);
const SOME: Count = Count::AtLeast(2);

/// The full rule set. Structural atoms come first in each conjunction so
/// that data checks only run for tests that can still apply.
pub fn build_knowledge_base() -> Vec<TestRequirement> {
    let rule = |test, family, power_rank, atoms| TestRequirement { test, family, power_rank, atoms };
    let cmp = || vec![two(Outcome, Factor), dtype(&[Continuous], Outcome), dtype(&[Categorical], Factor)];
    let rank_cmp = || vec![two(Outcome, Factor), dtype(&[Continuous, Ordinal], Outcome), dtype(&[Categorical], Factor)];
    let with = |mut base: Vec<Atom>, more: Vec<Atom>| {
        base.extend(more);
        base
    };
    let factorial = || {
        vec![
            Atom::VariableCount { count: SOME, roles: vec![Outcome, Design] },
            dtype(&[Continuous], Outcome),
            dtype(&[Categorical], Design),
            indep(Design),
            groups(SOME, Design),
            normal(Outcome, Some(Design)),
            eqvar(Outcome, Design),
        ]
    };
    let corr = || vec![two(X, Y)];

    use Family::*;
    use TestKind::*;
    vec![
        rule(
            StudentT,
            Parametric,
            1,
            with(
                cmp(),
                vec![indep(Factor), groups(TWO, Factor), normal(Outcome, Some(Factor)), eqvar(Outcome, Factor)],
            ),
        ),
        rule(
            PairedT,
            Parametric,
            2,
            with(cmp(), vec![dep(Factor), groups(TWO, Factor), normal(Outcome, Some(Factor))]),
        ),
        rule(
            FTest,
            Parametric,
            3,
            with(
                cmp(),
                vec![indep(Factor), groups(SOME, Factor), normal(Outcome, Some(Factor)), eqvar(Outcome, Factor)],
            ),
        ),
        rule(
            RmOneWayAnova,
            Parametric,
            4,
            with(cmp(), vec![dep(Factor), groups(SOME, Factor), normal(Outcome, Some(Factor)), eqvar(Outcome, Factor)]),
        ),
        rule(TwoWayAnova, Parametric, 5, factorial()),
        rule(FactorialAnova, Parametric, 6, factorial()),
        rule(
            Pearson,
            Parametric,
            7,
            with(corr(), vec![dtype(&[Continuous], X), dtype(&[Continuous], Y), normal(X, None), normal(Y, None)]),
        ),
        rule(
            Pointbiserial,
            Parametric,
            8,
            with(corr(), vec![dtype(&[Continuous], X), dtype(&[Categorical], Y), groups(TWO, Y), normal(X, Some(Y))]),
        ),
        rule(
            WelchT,
            Nonparametric,
            10,
            with(cmp(), vec![indep(Factor), groups(TWO, Factor), normal(Outcome, Some(Factor))]),
        ),
        rule(MannWhitneyU, Nonparametric, 11, with(rank_cmp(), vec![indep(Factor), groups(TWO, Factor)])),
        rule(WilcoxonSignedRank, Nonparametric, 12, with(rank_cmp(), vec![dep(Factor), groups(TWO, Factor)])),
        rule(KruskalWallis, Nonparametric, 13, with(rank_cmp(), vec![indep(Factor), groups(SOME, Factor)])),
        rule(Friedman, Nonparametric, 14, with(rank_cmp(), vec![dep(Factor), groups(SOME, Factor)])),
        rule(
            Spearman,
            Nonparametric,
            15,
            with(corr(), vec![dtype(&[Continuous, Ordinal], X), dtype(&[Continuous, Ordinal], Y)]),
        ),
        rule(
            Kendall,
            Nonparametric,
            16,
            with(corr(), vec![dtype(&[Continuous, Ordinal], X), dtype(&[Continuous, Ordinal], Y)]),
        ),
        rule(
            ChiSquare,
            Proportion,
            20,
            vec![
                two(Outcome, Factor),
                dtype(&[Categorical], Outcome),
                dtype(&[Categorical], Factor),
                groups(SOME, Outcome),
                groups(SOME, Factor),
            ],
        ),
        rule(
            FisherExact,
            Proportion,
            21,
            vec![
                two(Outcome, Factor),
                dtype(&[Categorical], Outcome),
                dtype(&[Categorical], Factor),
                groups(TWO, Outcome),
                groups(TWO, Factor),
            ],
        ),
        rule(Bootstrap, Resampling, 30, vec![]),
    ]
}

#[derive(Serialize)]
struct AtomDump<'a> {
    code: u8,
    text: String,
    #[serde(flatten)]
    atom: &'a Atom,
}

#[derive(Serialize)]
struct RuleDump<'a> {
    test: TestKind,
    name: &'static str,
    family: Family,
    power_rank: u32,
    atoms: Vec<AtomDump<'a>>,
}

/// Machine-readable listing of every rule.
pub fn knowledge_base_json(kb: &[TestRequirement]) -> String {
    let dump: Vec<RuleDump> = kb
        .iter()
        .map(|r| RuleDump {
            test: r.test,
            name: r.test.display_name(),
            family: r.family,
            power_rank: r.power_rank,
            atoms: r.atoms.iter().map(|a| AtomDump { code: a.code(), text: a.to_string(), atom: a }).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&dump).expect("knowledge base serializes")
}
