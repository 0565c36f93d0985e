use assay_stats::dist::Distribution;
use assay_stats::*;
use proptest::prelude::*;

const TWO: Sidedness = Sidedness::TwoSided;
const GT: Sidedness = Sidedness::Greater;
const LT: Sidedness = Sidedness::Less;

fn sample(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, n)
}

fn distinct(xs: &[f64]) -> bool {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).all(|w| w[0] != w[1])
}

fn in_unit(r: &TestResult) -> bool {
    let ok = |p: Option<f64>| p.is_none_or(|p| (0.0..=1.0).contains(&p));
    ok(r.p_value) && ok(r.p_two_sided)
}

/// Strictly increasing on the sampled range.
fn warp(x: f64) -> f64 {
    x.exp_m1() * 0.5 + x * x * x
}

proptest! {
    #[test]
    fn p_values_lie_in_unit_interval(a in sample(3..20), b in sample(3..20)) {
        let n = a.len().min(b.len());
        let (x, y) = (&a[..n], &b[..n]);
        for side in [TWO, GT, LT] {
            for v in [TVariant::Student, TVariant::Welch] {
                prop_assert!(in_unit(&independent_t(&a, &b, v, side, 0.95).unwrap()));
            }
            prop_assert!(in_unit(&paired_t(x, y, side, 0.95).unwrap()));
            prop_assert!(in_unit(&mann_whitney_u(&a, &b, side).unwrap()));
            prop_assert!(in_unit(&wilcoxon_signed_rank(x, y, side).unwrap()));
            prop_assert!(in_unit(&pearson_r(x, y, side).unwrap()));
            prop_assert!(in_unit(&spearman_rho(x, y, side).unwrap()));
            prop_assert!(in_unit(&kendall_tau(x, y, side).unwrap()));
        }
        prop_assert!(in_unit(&one_way_anova(&[&a, &b]).unwrap()));
        prop_assert!(in_unit(&kruskal_wallis(&[&a, &b]).unwrap()));
        let m: Vec<Vec<f64>> = x.iter().zip(y).map(|(p, q)| vec![*p, *q]).collect();
        prop_assert!(in_unit(&rm_one_way_anova(&m).unwrap()));
        prop_assert!(in_unit(&friedman(&m).unwrap()));
    }

    #[test]
    fn continuous_tails_are_complementary(a in sample(3..20), b in sample(3..20)) {
        let n = a.len().min(b.len());
        let (x, y) = (&a[..n], &b[..n]);
        type Run<'a> = Box<dyn Fn(Sidedness) -> TestResult + 'a>;
        let runs: Vec<Run> = vec![
            Box::new(|s| independent_t(&a, &b, TVariant::Student, s, 0.95).unwrap()),
            Box::new(|s| independent_t(&a, &b, TVariant::Welch, s, 0.95).unwrap()),
            Box::new(|s| paired_t(x, y, s, 0.95).unwrap()),
            Box::new(|s| pearson_r(x, y, s).unwrap()),
            Box::new(|s| spearman_rho(x, y, s).unwrap()),
            Box::new(|s| kendall_tau(x, y, s).unwrap()),
        ];
        for run in runs {
            let total = run(GT).p_value.unwrap() + run(LT).p_value.unwrap();
            prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
        }
    }

    #[test]
    fn rank_test_tails_cover_point_mass(a in sample(1..9), b in sample(1..9)) {
        let up = mann_whitney_u(&a, &b, GT).unwrap().p_value.unwrap();
        let down = mann_whitney_u(&a, &b, LT).unwrap().p_value.unwrap();
        prop_assert!(up + down >= 1.0 - 1e-12);
    }

    #[test]
    fn mann_whitney_exact_and_normal_agree_at_boundary(a in sample(5..16), extra in sample(20..21)) {
        let b = &extra[..20 - a.len()];
        prop_assume!(distinct(&[a.as_slice(), b].concat()));
        let approx = RankTestConfig { mann_whitney_exact_max: 0, ..Default::default() };
        for side in [TWO, GT, LT] {
            let exact = mann_whitney_u(&a, b, side).unwrap();
            let normal = mann_whitney_u_with(&a, b, side, &approx).unwrap();
            prop_assert_eq!(exact.method.as_str(), "exact");
            prop_assert!((exact.p_value.unwrap() - normal.p_value.unwrap()).abs() <= 0.02);
        }
    }

    #[test]
    fn wilcoxon_exact_and_normal_agree_at_boundary(d in sample(15..16)) {
        prop_assume!(d.iter().all(|v| *v != 0.0));
        let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
        prop_assume!(distinct(&abs));
        let zero = [0.0; 15];
        let approx = RankTestConfig { wilcoxon_exact_max: 0, ..Default::default() };
        for side in [TWO, GT, LT] {
            let exact = wilcoxon_signed_rank(&d, &zero, side).unwrap();
            let normal = wilcoxon_signed_rank_with(&d, &zero, side, &approx).unwrap();
            prop_assert_eq!(exact.method.as_str(), "exact");
            prop_assert!((exact.p_value.unwrap() - normal.p_value.unwrap()).abs() <= 0.02);
        }
    }

    #[test]
    fn rank_statistics_ignore_monotone_transforms(
        a in prop::collection::vec(-3.0f64..3.0, 3..12),
        b in prop::collection::vec(-3.0f64..3.0, 3..12),
    ) {
        let n = a.len().min(b.len());
        let (x, y) = (&a[..n], &b[..n]);
        let wa: Vec<f64> = a.iter().map(|v| warp(*v)).collect();
        let wb: Vec<f64> = b.iter().map(|v| warp(*v)).collect();
        let (wx, wy) = (&wa[..n], &wb[..n]);
        let stat = |r: TestResult| r.statistic.value;
        prop_assert_eq!(stat(mann_whitney_u(&a, &b, TWO).unwrap()), stat(mann_whitney_u(&wa, &wb, TWO).unwrap()));
        prop_assert_eq!(stat(kruskal_wallis(&[&a, &b]).unwrap()), stat(kruskal_wallis(&[&wa, &wb]).unwrap()));
        prop_assert_eq!(stat(spearman_rho(x, y, TWO).unwrap()), stat(spearman_rho(wx, wy, TWO).unwrap()));
        prop_assert_eq!(stat(kendall_tau(x, y, TWO).unwrap()), stat(kendall_tau(wx, wy, TWO).unwrap()));
        let m: Vec<Vec<f64>> = x.iter().zip(y).map(|(p, q)| vec![*p, *q, p * q]).collect();
        let wm: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|v| warp(*v)).collect()).collect();
        prop_assert_eq!(stat(friedman(&m).unwrap()), stat(friedman(&wm).unwrap()));
        // signed ranks are invariant under odd increasing transforms of the differences
        let d: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
        let wd: Vec<f64> = d.iter().map(|v| v * v * v + v).collect();
        let zero = vec![0.0; n];
        prop_assert_eq!(
            stat(wilcoxon_signed_rank(&d, &zero, TWO).unwrap()),
            stat(wilcoxon_signed_rank(&wd, &zero, TWO).unwrap())
        );
    }

    #[test]
    fn parametric_p_values_ignore_affine_maps(
        a in sample(3..15),
        b in sample(3..15),
        scale in 0.01f64..100.0,
        shift in -1e3f64..1e3,
    ) {
        let map = |xs: &[f64]| xs.iter().map(|v| scale * v + shift).collect::<Vec<_>>();
        let (ma, mb) = (map(&a), map(&b));
        let close = |p: f64, q: f64| (p - q).abs() <= 1e-9 * p.max(1e-12).max(q);
        for v in [TVariant::Student, TVariant::Welch] {
            let p = independent_t(&a, &b, v, TWO, 0.95).unwrap().p_value.unwrap();
            let q = independent_t(&ma, &mb, v, TWO, 0.95).unwrap().p_value.unwrap();
            prop_assert!(close(p, q), "{p} vs {q}");
        }
        let p = one_way_anova(&[&a, &b]).unwrap().p_value.unwrap();
        let q = one_way_anova(&[&ma, &mb]).unwrap().p_value.unwrap();
        prop_assert!(close(p, q), "{p} vs {q}");
    }

    #[test]
    fn swapping_groups_flips_direction(a in sample(2..15), b in sample(2..15)) {
        for v in [TVariant::Student, TVariant::Welch] {
            let fwd = independent_t(&a, &b, v, GT, 0.95).unwrap();
            let rev = independent_t(&b, &a, v, GT, 0.95).unwrap();
            prop_assert_eq!(fwd.statistic.value, -rev.statistic.value);
            prop_assert!((fwd.p_value.unwrap() - (1.0 - rev.p_value.unwrap())).abs() < 1e-12);
            prop_assert_eq!(fwd.p_two_sided, rev.p_two_sided);
        }
    }

    #[test]
    fn cdfs_are_monotone(df1 in 0.5f64..60.0, df2 in 0.5f64..60.0, xs in prop::collection::vec(-50.0f64..50.0, 2..30)) {
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let dists = [
            Distribution::StandardNormal,
            Distribution::student_t(df1).unwrap(),
            Distribution::f(df1, df2).unwrap(),
            Distribution::chi_square(df1).unwrap(),
        ];
        for d in dists {
            for w in xs.windows(2) {
                prop_assert!(d.cdf(w[0]) <= d.cdf(w[1]), "{d:?} at {w:?}");
            }
            prop_assert!(d.cdf(f64::NEG_INFINITY).abs() <= 1e-12);
            prop_assert!((d.cdf(f64::INFINITY) - 1.0).abs() <= 1e-12);
            prop_assert!(d.cdf(-1e300).abs() <= 1e-12);
            prop_assert!((d.cdf(1e300) - 1.0).abs() <= 1e-12);
        }
    }
}
