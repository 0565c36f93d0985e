mod common;

use assay_core::dataset::{Column, Dataset};
use assay_core::properties::*;
use assay_core::speclang::{parse_spec, validate_spec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use serde::Deserialize;

use common::*;

#[derive(Deserialize)]
struct ShapiroCase {
    name: String,
    x: Vec<f64>,
    w: f64,
    p: f64,
}

#[test]
fn shapiro_wilk_matches_reference_implementation() {
    let cases: Vec<ShapiroCase> =
        serde_json::from_str(include_str!("data/shapiro_reference.json")).expect("reference file");
    for c in cases {
        let (w, p) = shapiro_wilk(&c.x).unwrap();
        assert!((w - c.w).abs() < 1e-5, "{}: W {w} vs {}", c.name, c.w);
        assert!((p - c.p).abs() <= 1e-3 * c.p.max(1e-6), "{}: p {p} vs {}", c.name, c.p);
    }
}

#[test]
fn shapiro_wilk_weights_example() {
    // eleven body weights; the published two-decimal W is 0.79
    let x = [148.0, 154.0, 158.0, 160.0, 161.0, 162.0, 166.0, 170.0, 182.0, 195.0, 236.0];
    let (w, p) = shapiro_wilk(&x).unwrap();
    assert!((w - 0.79).abs() < 2e-3, "{w}");
    assert!(p < 0.01, "{p}");
}

/// Levene W from its definition, in exact arithmetic.
fn levene_rational(groups: &[Vec<i64>]) -> BigRational {
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let z: Vec<Vec<BigRational>> = groups
        .iter()
        .map(|g| {
            let m = g.iter().map(|v| r(*v)).fold(BigRational::zero(), |a, b| a + b) / r(g.len() as i64);
            g.iter()
                .map(|v| {
                    let d = r(*v) - &m;
                    if d < BigRational::zero() {
                        -d
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect();
    let n: i64 = groups.iter().map(|g| g.len() as i64).sum();
    let k = groups.len() as i64;
    let total = z.iter().flatten().fold(BigRational::zero(), |a, b| a + b) / r(n);
    let means: Vec<BigRational> =
        z.iter().map(|g| g.iter().fold(BigRational::zero(), |a, b| a + b) / r(g.len() as i64)).collect();
    let between = z
        .iter()
        .zip(&means)
        .map(|(g, m)| r(g.len() as i64) * (m - &total) * (m - &total))
        .fold(BigRational::zero(), |a, b| a + b);
    let within = z
        .iter()
        .zip(&means)
        .flat_map(|(g, m)| g.iter().map(move |v| (v - m) * (v - m)))
        .fold(BigRational::zero(), |a, b| a + b);
    (between / r(k - 1)) / (within / r(n - k))
}

#[test]
fn levene_small_example_against_rational_oracle() {
    let (w, p) = levene_test(&[&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]], Center::Mean).unwrap();
    let exact = levene_rational(&[vec![1, 2, 3], vec![10, 20, 30]]);
    assert_eq!(exact, BigRational::new(BigInt::from(324), BigInt::from(101)));
    assert!((w - exact.to_f64().unwrap()).abs() < 1e-12);
    // scipy.stats.levene(center="mean")
    assert!((p - 0.1477669257618933).abs() < 1e-10, "{p}");
}

proptest! {
    #[test]
    fn levene_matches_rational_oracle(groups in prop::collection::vec(prop::collection::vec(-50i64..50, 2..8), 2..5)) {
        let within_zero = groups.iter().all(|g| {
            let sum: i64 = g.iter().sum();
            let mut d: Vec<i64> = g.iter().map(|v| (v * g.len() as i64 - sum).abs()).collect();
            d.sort_unstable();
            d.dedup();
            d.len() == 1
        });
        prop_assume!(!within_zero);
        let exact = levene_rational(&groups);
        let fs: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|v| *v as f64).collect()).collect();
        let slices: Vec<&[f64]> = fs.iter().map(Vec::as_slice).collect();
        let (w, _) = levene_test(&slices, Center::Mean).unwrap();
        let e = exact.to_f64().unwrap();
        prop_assert!((w - e).abs() <= 1e-9 * e.abs().max(1.0), "{} vs {}", w, e);
    }
}

const USCRIME: &str = "\
data:
  path = uscrime.csv
variables:
  So = nominal {0, 1}
  Prob = ratio [0, 1]
design:
  study_type = observational
  contributor = So
  outcome = Prob
assumptions:
  normality(Prob) = true
hypothesis:
  So:1 > So:0
";

fn uscrime() -> (assay_core::speclang::ValidatedSpec, Dataset) {
    let s = spec(USCRIME);
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo/uscrime.csv");
    let d = Dataset::load_csv(&path, &s).unwrap();
    (s, d)
}

fn normality(role: Role, given: Option<Role>) -> Atom {
    Atom::Normality { role, given }
}

#[test]
fn uscrime_dataset_shape() {
    let (_, d) = uscrime();
    assert_eq!(d.row_count(), 47);
    let g = d.group_samples("Prob", "So").unwrap();
    assert_eq!(g.groups.iter().map(Vec::len).sum::<usize>(), 47);
    assert_eq!(g.groups[1].len(), 16);
}

#[test]
fn assumed_normality_records_the_computed_check() {
    let (s, d) = uscrime();
    let ev = PropertyEvaluator::new(&s, &d);
    let v = ev.evaluate_property(&normality(Role::Outcome, Some(Role::Factor))).unwrap();
    assert!(v.holds);
    assert_eq!(v.provenance, Provenance::Assumed);
    let entry = &ev.cache().entries()[0];
    let computed = entry.computed.as_ref().unwrap();
    assert_eq!(computed.provenance, Provenance::Computed);
    assert_eq!(computed.evidence.len(), 2);
    // scipy.stats.shapiro on each So group
    assert!((computed.evidence[0].statistic - 0.94501).abs() < 1e-5);
    assert!((computed.evidence[1].statistic - 0.89975).abs() < 1e-5);
    assert!(computed.holds);
}

#[test]
fn equal_variance_is_computed_with_levene() {
    let (s, d) = uscrime();
    let ev = PropertyEvaluator::new(&s, &d);
    let v = ev.evaluate_property(&Atom::EqualVariance { role: Role::Outcome, given: Role::Factor }).unwrap();
    assert_eq!(v.provenance, Provenance::Computed);
    assert!(v.holds);
    let e = &v.evidence[0];
    assert_eq!(e.check, "levene");
    assert!((e.statistic - 2.12166).abs() < 1e-4, "{}", e.statistic);
    assert!((e.p_value - 0.15217).abs() < 1e-4, "{}", e.p_value);
}

#[test]
fn identical_groups_have_equal_variance() {
    let s = two_group_spec("");
    let d = data(&two_group_csv(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), &s);
    let ev = PropertyEvaluator::new(&s, &d);
    let v = ev.evaluate_property(&Atom::EqualVariance { role: Role::Outcome, given: Role::Factor }).unwrap();
    assert!(v.holds);
    assert_eq!(v.provenance, Provenance::Computed);
    assert_eq!((v.evidence[0].statistic, v.evidence[0].p_value), (0.0, 1.0));
}

#[test]
fn nominal_variable_is_structurally_not_continuous() {
    let (s, d) = uscrime();
    let ev = PropertyEvaluator::new(&s, &d);
    let v = ev.evaluate_property(&Atom::DTypeIs { classes: vec![DClass::Continuous], role: Role::Factor }).unwrap();
    assert!(!v.holds);
    assert_eq!(v.provenance, Provenance::Structural);
    let v = ev.evaluate_property(&normality(Role::Factor, None)).unwrap();
    assert!(!v.holds);
    assert_eq!(v.provenance, Provenance::Structural);
}

#[test]
fn small_groups_cannot_be_checked() {
    let s = two_group_spec("");
    let d = data(&two_group_csv(&[1.0, 2.0], &[1.0, 2.0, 5.0]), &s);
    let ev = PropertyEvaluator::new(&s, &d);
    let err = ev.evaluate_property(&normality(Role::Outcome, Some(Role::Factor))).unwrap_err();
    assert_eq!(err, PropertyError::InsufficientData { needed: 3, got: 2 });
}

#[test]
fn memoized_checks_run_once() {
    let (s, d) = uscrime();
    let ev = PropertyEvaluator::new(&s, &d);
    let atom = Atom::EqualVariance { role: Role::Outcome, given: Role::Factor };
    let first = ev.evaluate_property(&atom).unwrap();
    let runs = ev.cache().checks_run();
    let second = ev.evaluate_property(&atom).unwrap();
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
    assert_eq!(ev.cache().checks_run(), runs);
    assert_eq!(runs, 1);
    // Design resolves to the same single factor here: same property, same entry
    ev.evaluate_property(&Atom::EqualVariance { role: Role::Outcome, given: Role::Design }).unwrap();
    assert_eq!(ev.cache().checks_run(), 1);
}

fn structural_atoms() -> Vec<Atom> {
    use Role::*;
    vec![
        Atom::VariableCount { count: Count::Exactly(2), roles: vec![Outcome, Factor] },
        Atom::VariableCount { count: Count::AtLeast(2), roles: vec![Design] },
        Atom::DTypeIs { classes: vec![DClass::Continuous], role: Outcome },
        Atom::DTypeIs { classes: vec![DClass::Categorical], role: Factor },
        Atom::DTypeIs { classes: vec![DClass::Continuous, DClass::Ordinal], role: X },
        Atom::IndependentObservations { role: Factor },
        Atom::DependentObservations { role: Factor },
        Atom::GroupCount { count: Count::Exactly(2), role: Factor },
        Atom::GroupCount { count: Count::AtLeast(2), role: Design },
        // the continuity axiom decides these without data
        Atom::Normality { role: Factor, given: None },
        Atom::EqualVariance { role: Factor, given: Outcome },
    ]
}

#[test]
fn structural_atoms_never_read_samples() {
    let s = two_group_spec("");
    let clean = data(&two_group_csv(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]), &s);
    let poisoned = Dataset::from_columns(
        vec![
            (
                "g".into(),
                Column::Categorical {
                    categories: vec!["a".into(), "b".into()],
                    ordinal: false,
                    codes: vec![Some(0), Some(1)],
                },
            ),
            ("y".into(), Column::Numeric(vec![Some(f64::NAN), Some(f64::INFINITY)])),
        ],
        None,
    )
    .unwrap();
    let a = PropertyEvaluator::new(&s, &clean);
    let b = PropertyEvaluator::new(&s, &poisoned);
    for atom in structural_atoms() {
        assert_eq!(a.evaluate_property(&atom), b.evaluate_property(&atom), "{atom}");
    }
    assert_eq!(poisoned.sample_reads(), 0);
    assert_eq!(clean.sample_reads(), 0);
    assert_eq!(b.cache().checks_run(), 0);
}

fn dtype_spec(dtype: &str) -> String {
    let decl = match dtype {
        "nominal" | "ordinal" => format!("{dtype} {{lo, mid, hi}}"),
        other => other.to_string(),
    };
    format!(
        "data:\n  path = x.csv\nvariables:\n  g = nominal {{a, b}}\n  v = {decl}\n\
         design:\n  study_type = experiment\n  independent = g\n  dependent = v\n\
         hypothesis:\n  v: g:a > g:b\n"
    )
}

proptest! {
    #[test]
    fn normality_requires_continuity(dtype in prop::sample::select(vec!["nominal", "ordinal", "interval", "ratio"])) {
        let s = validate_spec(parse_spec(&dtype_spec(dtype)).unwrap()).unwrap();
        let empty = Dataset::from_columns(vec![], None).unwrap();
        let ev = PropertyEvaluator::new(&s, &empty);
        let continuous = ev.evaluate_property(&Atom::DTypeIs { classes: vec![DClass::Continuous], role: Role::Outcome }).unwrap();
        if !continuous.holds {
            let n = ev.evaluate_property(&Atom::Normality { role: Role::Outcome, given: None }).unwrap();
            prop_assert!(!n.holds);
            prop_assert_eq!(n.provenance, Provenance::Structural);
        }
        prop_assert_eq!(continuous.holds, dtype == "interval" || dtype == "ratio");
    }

    #[test]
    fn claims_take_precedence(
        a in prop::collection::vec(-10.0f64..10.0, 3..15),
        b in prop::collection::vec(-10.0f64..10.0, 3..15),
        norm in any::<bool>(),
        eqvar in any::<bool>(),
    ) {
        let claims = format!("  normality(y | g) = {norm}\n  equal_variance(y | g) = {eqvar}\n");
        let s = two_group_spec(&claims);
        let d = data(&two_group_csv(&a, &b), &s);
        let ev = PropertyEvaluator::new(&s, &d);
        let n = ev.evaluate_property(&Atom::Normality { role: Role::Outcome, given: Some(Role::Factor) }).unwrap();
        let e = ev.evaluate_property(&Atom::EqualVariance { role: Role::Outcome, given: Role::Factor }).unwrap();
        prop_assert_eq!((n.holds, n.provenance), (norm, Provenance::Assumed));
        prop_assert_eq!((e.holds, e.provenance), (eqvar, Provenance::Assumed));
    }
}
