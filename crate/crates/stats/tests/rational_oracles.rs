//! Statistics recomputed from their textbook definitions in exact rational
//! arithmetic on random integer data, then compared with the floating-point
//! routines. Square roots are avoided by comparing squared statistics.

use assay_stats::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn f(v: &Q) -> f64 {
    v.to_f64().unwrap()
}

fn fl(xs: &[i64]) -> Vec<f64> {
    xs.iter().map(|&v| v as f64).collect()
}

fn mean(xs: &[Q]) -> Q {
    xs.iter().fold(Q::zero(), |a, b| a + b) / q(xs.len() as i64)
}

fn ss(xs: &[Q]) -> Q {
    let m = mean(xs);
    xs.iter().map(|x| (x - &m) * (x - &m)).fold(Q::zero(), |a, b| a + b)
}

fn qs(xs: &[i64]) -> Vec<Q> {
    xs.iter().map(|&v| q(v)).collect()
}

/// Average ranks, `#(< x) + (#(== x) + 1) / 2`.
fn ranks(xs: &[i64]) -> Vec<Q> {
    xs.iter()
        .map(|x| {
            let below = xs.iter().filter(|v| *v < x).count() as i64;
            let equal = xs.iter().filter(|v| *v == x).count() as i64;
            q(below) + frac(equal + 1, 2)
        })
        .collect()
}

fn tie_sum(xs: &[i64]) -> Q {
    let mut seen = Vec::new();
    let mut total = Q::zero();
    for x in xs {
        if !seen.contains(x) {
            seen.push(*x);
            let t = q(xs.iter().filter(|v| *v == x).count() as i64);
            total += &t * &t * &t - &t;
        }
    }
    total
}

fn rel_close(got: f64, want: &Q, tol: f64) -> bool {
    let w = f(want);
    (got - w).abs() <= tol * w.abs().max(1e-300) || (got - w).abs() < 1e-300
}

fn sample(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..20, n)
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

proptest! {
    #[test]
    fn student_t_squared(a in sample(2..12), b in sample(2..12)) {
        let (qa, qb) = (qs(&a), qs(&b));
        let (n1, n2) = (q(a.len() as i64), q(b.len() as i64));
        let pooled = (ss(&qa) + ss(&qb)) / (&n1 + &n2 - q(2));
        prop_assume!(!pooled.is_zero());
        let diff = mean(&qa) - mean(&qb);
        let t2 = &diff * &diff / (pooled * (n1.recip() + n2.recip()));
        let r = independent_t(&fl(&a), &fl(&b), TVariant::Student, Sidedness::TwoSided, 0.95).unwrap();
        prop_assert!(rel_close(r.statistic.value.powi(2), &t2, 1e-11));
    }

    #[test]
    fn welch_dof(a in sample(2..12), b in sample(2..12)) {
        let (qa, qb) = (qs(&a), qs(&b));
        let (n1, n2) = (q(a.len() as i64), q(b.len() as i64));
        let v1 = ss(&qa) / (&n1 - q(1)) / &n1;
        let v2 = ss(&qb) / (&n2 - q(1)) / &n2;
        prop_assume!(!v1.is_zero() && !v2.is_zero());
        let dof = (&v1 + &v2) * (&v1 + &v2) / (&v1 * &v1 / (&n1 - q(1)) + &v2 * &v2 / (&n2 - q(1)));
        let r = independent_t(&fl(&a), &fl(&b), TVariant::Welch, Sidedness::TwoSided, 0.95).unwrap();
        prop_assert!(rel_close(r.dof[0], &dof, 1e-11));
    }

    #[test]
    fn paired_t_squared(pairs in prop::collection::vec((-20i64..20, -20i64..20), 2..15)) {
        let a: Vec<i64> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<i64> = pairs.iter().map(|p| p.1).collect();
        let d: Vec<Q> = pairs.iter().map(|p| q(p.0 - p.1)).collect();
        let n = q(d.len() as i64);
        let var = ss(&d) / (&n - q(1));
        prop_assume!(!var.is_zero());
        let m = mean(&d);
        let t2 = &n * &m * &m / var;
        let r = paired_t(&fl(&a), &fl(&b), Sidedness::TwoSided, 0.95).unwrap();
        prop_assert!(rel_close(r.statistic.value.powi(2), &t2, 1e-11));
    }

    #[test]
    fn pearson_r_squared(pairs in prop::collection::vec((-20i64..20, -20i64..20), 3..15)) {
        let x: Vec<i64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<i64> = pairs.iter().map(|p| p.1).collect();
        let (qx, qy) = (qs(&x), qs(&y));
        let (mx, my) = (mean(&qx), mean(&qy));
        let sxy = qx.iter().zip(&qy).map(|(a, b)| (a - &mx) * (b - &my)).fold(Q::zero(), |a, b| a + b);
        let (sxx, syy) = (ss(&qx), ss(&qy));
        prop_assume!(!sxx.is_zero() && !syy.is_zero());
        let r2 = &sxy * &sxy / (sxx * syy);
        let r = pearson_r(&fl(&x), &fl(&y), Sidedness::TwoSided).unwrap();
        prop_assert!((r.statistic.value.powi(2) - f(&r2)).abs() < 1e-13);
        prop_assert!(sxy.is_zero() || (r.statistic.value > 0.0) == sxy.is_positive());
    }

    #[test]
    fn spearman_on_tied_ranks(pairs in prop::collection::vec((0i64..5, 0i64..5), 3..15)) {
        let x: Vec<i64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<i64> = pairs.iter().map(|p| p.1).collect();
        let (rx, ry) = (ranks(&x), ranks(&y));
        let (mx, my) = (mean(&rx), mean(&ry));
        let sxy = rx.iter().zip(&ry).map(|(a, b)| (a - &mx) * (b - &my)).fold(Q::zero(), |a, b| a + b);
        let (sxx, syy) = (ss(&rx), ss(&ry));
        prop_assume!(!sxx.is_zero() && !syy.is_zero());
        let rho2 = &sxy * &sxy / (sxx * syy);
        let r = spearman_rho(&fl(&x), &fl(&y), Sidedness::TwoSided).unwrap();
        prop_assert!((r.statistic.value.powi(2) - f(&rho2)).abs() < 1e-13);
    }

    #[test]
    fn one_way_f(groups in prop::collection::vec(sample(2..8), 2..5)) {
        let qg: Vec<Vec<Q>> = groups.iter().map(|g| qs(g)).collect();
        let all: Vec<Q> = qg.iter().flatten().cloned().collect();
        let grand = mean(&all);
        let between = qg.iter().map(|g| q(g.len() as i64) * (mean(g) - &grand) * (mean(g) - &grand))
            .fold(Q::zero(), |a, b| a + b);
        let within = qg.iter().map(|g| ss(g)).fold(Q::zero(), |a, b| a + b);
        prop_assume!(!within.is_zero());
        let k = q(groups.len() as i64);
        let n = q(all.len() as i64);
        let fstat = (between / (&k - q(1))) / (within / (n - k));
        let refs: Vec<Vec<f64>> = groups.iter().map(|g| fl(g)).collect();
        let slices: Vec<&[f64]> = refs.iter().map(Vec::as_slice).collect();
        let r = one_way_anova(&slices).unwrap();
        prop_assert!(rel_close(r.statistic.value, &fstat, 1e-10) || f(&fstat) < 1e-12);
    }

    #[test]
    fn repeated_measures_f(m in prop::collection::vec(sample(3..4), 4..5)) {
        let (n, k) = (m.len(), 3usize);
        let qm: Vec<Vec<Q>> = m.iter().map(|r| qs(r)).collect();
        let all: Vec<Q> = qm.iter().flatten().cloned().collect();
        let grand = mean(&all);
        let sst = ss(&all);
        let ss_subj = qm.iter().map(|r| q(k as i64) * (mean(r) - &grand) * (mean(r) - &grand))
            .fold(Q::zero(), |a, b| a + b);
        let ss_cond = (0..k).map(|j| {
            let col: Vec<Q> = qm.iter().map(|r| r[j].clone()).collect();
            q(n as i64) * (mean(&col) - &grand) * (mean(&col) - &grand)
        }).fold(Q::zero(), |a, b| a + b);
        let ss_err = sst - &ss_subj - &ss_cond;
        prop_assume!(!ss_err.is_zero());
        let fstat = (ss_cond / q(k as i64 - 1)) / (ss_err / q(((n - 1) * (k - 1)) as i64));
        let r = rm_one_way_anova(&m.iter().map(|r| fl(r)).collect::<Vec<_>>()).unwrap();
        prop_assert!(rel_close(r.statistic.value, &fstat, 1e-10) || f(&fstat) < 1e-12);
    }

    #[test]
    fn balanced_two_by_two(cells in prop::collection::vec(sample(3..4), 4..5)) {
        // cells ordered (a0,b0), (a0,b1), (a1,b0), (a1,b1), three replicates each
        let qc: Vec<Vec<Q>> = cells.iter().map(|c| qs(c)).collect();
        let cm: Vec<Q> = qc.iter().map(|c| mean(c)).collect();
        let all: Vec<Q> = qc.iter().flatten().cloned().collect();
        let g = mean(&all);
        let a_mean = [(&cm[0] + &cm[1]) / q(2), (&cm[2] + &cm[3]) / q(2)];
        let b_mean = [(&cm[0] + &cm[2]) / q(2), (&cm[1] + &cm[3]) / q(2)];
        let r = q(3);
        let sq = |v: Q| &v * &v;
        let ss_a = a_mean.iter().map(|m| q(2) * &r * sq(m - &g)).fold(Q::zero(), |a, b| a + b);
        let ss_b = b_mean.iter().map(|m| q(2) * &r * sq(m - &g)).fold(Q::zero(), |a, b| a + b);
        let ss_ab = (0..4).map(|c| &r * sq(&cm[c] - &a_mean[c / 2] - &b_mean[c % 2] + &g))
            .fold(Q::zero(), |a, b| a + b);
        let ss_e = qc.iter().map(|c| ss(c)).fold(Q::zero(), |a, b| a + b);
        prop_assume!(!ss_e.is_zero());
        let df_e = q(8);
        let want = [ss_a, ss_b, ss_ab].map(|s| s / (&ss_e / &df_e));

        let y: Vec<f64> = cells.iter().flat_map(|c| fl(c)).collect();
        let codes = |pick: fn(usize) -> usize| (0..12).map(|i| pick(i / 3)).collect::<Vec<_>>();
        let fa = Factor { name: "A".into(), codes: codes(|c| c / 2), levels: 2 };
        let fb = Factor { name: "B".into(), codes: codes(|c| c % 2), levels: 2 };
        let res = factorial_anova(&y, &[fa, fb]).unwrap();
        for (row, w) in res.anova_table.iter().zip(&want) {
            let got = row.f.unwrap();
            prop_assert!((got - f(w)).abs() <= 1e-8 * f(w).max(1.0), "{} {got} vs {}", row.effect, f(w));
        }
    }

    #[test]
    fn kruskal_wallis_h(groups in prop::collection::vec(prop::collection::vec(0i64..8, 1..6), 2..4)) {
        let all: Vec<i64> = groups.iter().flatten().copied().collect();
        prop_assume!(all.len() >= 3);
        let nq = q(all.len() as i64);
        let correction = Q::one() - tie_sum(&all) / (&nq * &nq * &nq - &nq);
        prop_assume!(!correction.is_zero());
        let r = ranks(&all);
        let mut offset = 0;
        let mut between = Q::zero();
        for g in &groups {
            let sum = r[offset..offset + g.len()].iter().fold(Q::zero(), |a, b| a + b);
            between += &sum * &sum / q(g.len() as i64);
            offset += g.len();
        }
        let h = (frac(12, 1) / (&nq * (&nq + q(1))) * between - q(3) * (&nq + q(1))) / correction;
        let refs: Vec<Vec<f64>> = groups.iter().map(|g| fl(g)).collect();
        let slices: Vec<&[f64]> = refs.iter().map(Vec::as_slice).collect();
        let got = kruskal_wallis(&slices).unwrap().statistic.value;
        prop_assert!((got - f(&h)).abs() < 1e-10);
    }

    #[test]
    fn friedman_q(m in prop::collection::vec(prop::collection::vec(0i64..6, 3..4), 3..4)) {
        let (n, k) = (q(m.len() as i64), q(3));
        let mut col = vec![Q::zero(); 3];
        for row in &m {
            for (c, r) in col.iter_mut().zip(ranks(row)) {
                *c += r;
            }
        }
        let sum_sq = col.iter().map(|r| r * r).fold(Q::zero(), |a, b| a + b);
        let qstat = q(12) / (&n * &k * (&k + q(1))) * sum_sq - q(3) * &n * (&k + q(1));
        let got = friedman(&m.iter().map(|r| fl(r)).collect::<Vec<_>>()).unwrap().statistic.value;
        prop_assert!((got - f(&qstat).max(0.0)).abs() < 1e-10);
    }

    #[test]
    fn chi_square_two_by_three(t in prop::collection::vec(prop::collection::vec(1u64..30, 3..4), 2..3)) {
        let rows: Vec<Q> = t.iter().map(|r| q(r.iter().sum::<u64>() as i64)).collect();
        let cols: Vec<Q> = (0..3).map(|j| q(t.iter().map(|r| r[j]).sum::<u64>() as i64)).collect();
        let n = rows.iter().fold(Q::zero(), |a, b| a + b);
        let mut chi = Q::zero();
        for (i, r) in t.iter().enumerate() {
            for (j, &o) in r.iter().enumerate() {
                let e = &rows[i] * &cols[j] / &n;
                let d = q(o as i64) - &e;
                chi += &d * &d / e;
            }
        }
        let got = chi_square_test(&t).unwrap().statistic.value;
        prop_assert!((got - f(&chi)).abs() < 1e-10 * f(&chi).max(1.0));
    }

    #[test]
    fn fisher_matches_enumeration(a in 0u64..12, b in 0u64..12, c in 0u64..12, d in 0u64..12) {
        prop_assume!(a + b > 0 && c + d > 0 && a + c > 0 && b + d > 0);
        let (r1, r2, c1) = (a + b, c + d, a + c);
        let n = r1 + r2;
        let total = binom(n, c1);
        let lo = c1.saturating_sub(r2);
        let hi = r1.min(c1);
        let p = |x: u64| Q::new(binom(r1, x) * binom(r2, c1 - x), total.clone());
        let observed = p(a);
        let (mut two, mut greater, mut less) = (Q::zero(), Q::zero(), Q::zero());
        for x in lo..=hi {
            let px = p(x);
            if px <= observed { two += &px; }
            if x >= a { greater += &px; }
            if x <= a { less += &px; }
        }
        let table = vec![vec![a, b], vec![c, d]];
        for (side, want) in [(Sidedness::TwoSided, two), (Sidedness::Greater, greater), (Sidedness::Less, less)] {
            let got = fisher_exact(&table, side).unwrap().p_value.unwrap();
            prop_assert!((got - f(&want)).abs() < 1e-12, "{side:?}: {got} vs {}", f(&want));
        }
    }
}
