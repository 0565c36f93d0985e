//! Rank-based tests: Mann-Whitney U, Wilcoxon signed rank, Kruskal-Wallis
//! and Friedman.
//!
//! The two-sample and paired tests use the exact null distribution of the
//! rank sum when the sample is small and untied, and a normal approximation
//! with tie-corrected variance and a 0.5 continuity correction otherwise.
//! Exact p-values are `count / total` where `count` is the number of rank
//! assignments at least as extreme as the observed one.

use crate::dist::{chi_square_sf, normal_cdf, normal_sf};
use crate::error::{Result, StatsError};
use crate::moments::require_finite;
use crate::ranks::{average_ranks, tie_term};
use crate::result::{Sidedness, TestKind, TestResult};

/// Thresholds below which exact distributions are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankTestConfig {
    /// Largest combined sample size `n1 + n2` for an exact Mann-Whitney test.
    pub mann_whitney_exact_max: usize,
    /// Largest number of nonzero differences for an exact Wilcoxon test.
    pub wilcoxon_exact_max: usize,
}

impl Default for RankTestConfig {
    fn default() -> Self {
        Self { mann_whitney_exact_max: 20, wilcoxon_exact_max: 15 }
    }
}

const EXACT_LIMIT: usize = 60;

/// Counts of `k`-subsets of `{1..=n}` by their sum.
fn subset_sum_counts(n: usize, k: usize) -> Vec<u128> {
    let max_sum = n * (n + 1) / 2;
    let mut dp = vec![vec![0u128; max_sum + 1]; k + 1];
    dp[0][0] = 1;
    for item in 1..=n {
        for size in (1..=k.min(item)).rev() {
            for s in (item..=max_sum).rev() {
                dp[size][s] += dp[size - 1][s - item];
            }
        }
    }
    dp.swap_remove(k)
}

/// Counts of all subsets of `{1..=n}` by their sum.
fn signed_rank_counts(n: usize) -> Vec<u128> {
    let max_sum = n * (n + 1) / 2;
    let mut dp = vec![0u128; max_sum + 1];
    dp[0] = 1;
    for item in 1..=n {
        for s in (item..=max_sum).rev() {
            dp[s] += dp[s - item];
        }
    }
    dp
}

/// Upper and lower tail probabilities of `observed` under integer-indexed counts.
fn exact_tails(counts: &[u128], offset: usize, observed: usize) -> (f64, f64) {
    let total: u128 = counts.iter().sum();
    let idx = observed + offset;
    let ge: u128 = counts[idx..].iter().sum();
    let le: u128 = counts[..=idx].iter().sum();
    (ge as f64 / total as f64, le as f64 / total as f64)
}

fn approx_tails(stat: f64, mean: f64, sd: f64) -> (f64, f64) {
    if sd == 0.0 {
        return (1.0, 1.0);
    }
    (normal_sf((stat - mean - 0.5) / sd), normal_cdf((stat - mean + 0.5) / sd))
}

pub fn mann_whitney_u(a: &[f64], b: &[f64], side: Sidedness) -> Result<TestResult> {
    mann_whitney_u_with(a, b, side, &RankTestConfig::default())
}

/// Mann-Whitney U for `a` against `b`. The reported statistic is `U` of `a`;
/// `Greater` tests whether `a` tends to be larger.
pub fn mann_whitney_u_with(a: &[f64], b: &[f64], side: Sidedness, config: &RankTestConfig) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::InsufficientData { needed: 1, got: a.len().min(b.len()) });
    }
    require_finite(a)?;
    require_finite(b)?;
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let combined: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = average_ranks(&combined);
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;

    let (nf1, nf2, nf) = (n1 as f64, n2 as f64, n as f64);
    let mean = nf1 * nf2 / 2.0;
    let var = nf1 * nf2 / 12.0 * ((nf + 1.0) - tie_term(&ties) / (nf * (nf - 1.0)));
    let sd = var.max(0.0).sqrt();
    let tied = ties.iter().any(|&t| t > 1);

    let exact = !tied && n <= config.mann_whitney_exact_max.min(EXACT_LIMIT);
    let (upper, lower, method) = if exact {
        // U = rank sum - n1(n1+1)/2, so U indexes the subset-sum table at that offset
        let counts = subset_sum_counts(n, n1);
        let (up, lo) = exact_tails(&counts, n1 * (n1 + 1) / 2, u as usize);
        (up, lo, "exact")
    } else {
        let (up, lo) = approx_tails(u, mean, sd);
        (up, lo, "normal approximation")
    };

    let z = if sd > 0.0 { (u - mean) / sd } else { 0.0 };
    let mut result = TestResult::new(TestKind::MannWhitneyU, "U", u)
        .with_p(side, upper, lower)
        .with_effect("r", z.abs() / nf.sqrt());
    result.method = method.into();
    result.sample_sizes = vec![n1, n2];
    if sd == 0.0 {
        result.notes.push("all observations are tied".into());
    }
    Ok(result)
}

pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], side: Sidedness) -> Result<TestResult> {
    wilcoxon_signed_rank_with(a, b, side, &RankTestConfig::default())
}

/// Wilcoxon signed-rank test on `a[i] - b[i]`, dropping zero differences.
/// The reported statistic is `min(W+, W-)`; `Greater` tests whether the
/// differences tend to be positive.
pub fn wilcoxon_signed_rank_with(a: &[f64], b: &[f64], side: Sidedness, config: &RankTestConfig) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(StatsError::Domain(format!("paired samples differ in length ({} vs {})", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(StatsError::InsufficientData { needed: 1, got: 0 });
    }
    require_finite(a)?;
    require_finite(b)?;
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let zeros = a.len() - diffs.len();
    if diffs.is_empty() {
        return Err(StatsError::AllZeroDifferences);
    }
    let n = diffs.len();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = average_ranks(&abs);
    let w_plus: f64 = ranks.iter().zip(&diffs).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();
    let nf = n as f64;
    let total_rank = nf * (nf + 1.0) / 2.0;
    let w_minus = total_rank - w_plus;

    let mean = total_rank / 2.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term(&ties) / 48.0;
    let sd = var.max(0.0).sqrt();
    let tied = ties.iter().any(|&t| t > 1);

    let exact = !tied && n <= config.wilcoxon_exact_max.min(EXACT_LIMIT);
    let (upper, lower, method) = if exact {
        let (up, lo) = exact_tails(&signed_rank_counts(n), 0, w_plus as usize);
        (up, lo, "exact")
    } else {
        let (up, lo) = approx_tails(w_plus, mean, sd);
        (up, lo, "normal approximation")
    };

    let z = if sd > 0.0 { (w_plus - mean) / sd } else { 0.0 };
    let mut result = TestResult::new(TestKind::WilcoxonSignedRank, "W", w_plus.min(w_minus))
        .with_p(side, upper, lower)
        .with_effect("r", z.abs() / nf.sqrt());
    result.method = method.into();
    result.sample_sizes = vec![n];
    result.notes.push(format!("W+ = {w_plus}, W- = {w_minus}"));
    if zeros > 0 {
        result.notes.push(format!("{zeros} zero difference(s) dropped"));
    }
    Ok(result)
}

/// Kruskal-Wallis H with tie correction; effect size is epsilon squared,
/// `H / (N - 1)`.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<TestResult> {
    if groups.len() < 2 {
        return Err(StatsError::Domain(format!("need at least 2 groups, got {}", groups.len())));
    }
    if let Some(i) = groups.iter().position(|g| g.is_empty()) {
        return Err(StatsError::EmptyGroup(i));
    }
    for g in groups {
        require_finite(g)?;
    }
    let all: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = all.len();
    if n < 3 {
        return Err(StatsError::InsufficientData { needed: 3, got: n });
    }
    let (ranks, ties) = average_ranks(&all);
    let nf = n as f64;
    let mut offset = 0;
    let mut between = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        between += r * r / g.len() as f64;
        offset += g.len();
    }
    let correction = 1.0 - tie_term(&ties) / (nf * nf * nf - nf);
    if correction <= 0.0 {
        return Err(StatsError::DegenerateSample("all observations are tied".into()));
    }
    let h = ((12.0 / (nf * (nf + 1.0)) * between - 3.0 * (nf + 1.0)) / correction).max(0.0);
    let df = (groups.len() - 1) as f64;

    let mut result = TestResult::new(TestKind::KruskalWallis, "H", h)
        .with_upper_p(chi_square_sf(h, df))
        .with_effect("epsilon_squared", h / (nf - 1.0));
    result.dof = vec![df];
    result.method = "chi-square approximation".into();
    result.sample_sizes = groups.iter().map(|g| g.len()).collect();
    Ok(result)
}

/// Friedman test on a units x conditions matrix, ranking within each unit.
/// No tie correction is applied. Effect size is Kendall's W.
pub fn friedman(matrix: &[Vec<f64>]) -> Result<TestResult> {
    if matrix.is_empty() {
        return Err(StatsError::NoCompleteUnits);
    }
    let k = matrix[0].len();
    if k < 2 {
        return Err(StatsError::Domain(format!("need at least 2 conditions, got {k}")));
    }
    if let Some(row) = matrix.iter().find(|r| r.len() != k) {
        return Err(StatsError::Domain(format!("ragged matrix: row of {} in {k} columns", row.len())));
    }
    let n = matrix.len();
    if n < 2 {
        return Err(StatsError::InsufficientData { needed: 2, got: n });
    }
    let mut col_sums = vec![0.0; k];
    for row in matrix {
        require_finite(row)?;
        let (r, _) = average_ranks(row);
        for (sum, v) in col_sums.iter_mut().zip(r) {
            *sum += v;
        }
    }
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = col_sums.iter().map(|r| r * r).sum();
    let q = (12.0 / (nf * kf * (kf + 1.0)) * sum_sq - 3.0 * nf * (kf + 1.0)).max(0.0);
    let df = kf - 1.0;

    let mut result = TestResult::new(TestKind::Friedman, "Q", q)
        .with_upper_p(chi_square_sf(q, df))
        .with_effect("kendall_w", q / (nf * (kf - 1.0)));
    result.dof = vec![df];
    result.method = "chi-square approximation".into();
    result.sample_sizes = vec![n; k];
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    // references from scipy.stats
    #[test]
    fn exact_mann_whitney() {
        let a = [1.1, 2.4, 3.3, 4.8, 5.2];
        let b = [0.5, 0.9, 1.7, 2.0];
        let r = mann_whitney_u(&a, &b, Sidedness::TwoSided).unwrap();
        assert_eq!(r.statistic.value, 18.0);
        assert_eq!(r.method, "exact");
        assert!((r.p_value.unwrap() - 0.063_492_063_492_063_49).abs() < 1e-15);
        let g = mann_whitney_u(&a, &b, Sidedness::Greater).unwrap();
        assert!((g.p_value.unwrap() - 0.031_746_031_746_031_744).abs() < 1e-15);
    }

    #[test]
    fn tied_mann_whitney_uses_corrected_normal() {
        let a = [1.0, 2.0, 2.0, 3.0, 5.0, 6.0, 6.0, 7.0, 9.0, 10.0, 11.0, 12.0];
        let b = [2.0, 3.0, 3.0, 4.0, 4.0, 5.0, 8.0, 8.0, 9.0, 1.0, 1.0, 0.0, 0.0, 1.0];
        let r = mann_whitney_u(&a, &b, Sidedness::TwoSided).unwrap();
        assert_eq!(r.statistic.value, 120.5);
        assert!((r.p_value.unwrap() - 0.062_986_930_282_354_41).abs() < 1e-12);
        let l = mann_whitney_u(&a, &b, Sidedness::Less).unwrap();
        assert!((l.p_value.unwrap() - 0.971_993_244_334_310_3).abs() < 1e-12);
    }

    #[test]
    fn exact_wilcoxon() {
        let d = [0.3, -1.2, 2.5, 1.9, 0.8, 3.1, -0.4, 1.4];
        let zero = [0.0; 8];
        let r = wilcoxon_signed_rank(&d, &zero, Sidedness::TwoSided).unwrap();
        assert_eq!(r.statistic.value, 6.0);
        assert!((r.p_value.unwrap() - 0.109_375).abs() < 1e-15);
        let g = wilcoxon_signed_rank(&d, &zero, Sidedness::Greater).unwrap();
        assert!((g.p_value.unwrap() - 0.054_687_5).abs() < 1e-15);
    }

    #[test]
    fn approximate_wilcoxon_drops_zeros() {
        let d = [1.0, -1.0, 2.0, 2.0, 3.0, -3.0, 4.0, 5.0, 5.0, 0.0, 6.0, 7.0, 8.0, 9.0, 10.0, -2.0, 11.0, 12.0];
        let zero = [0.0; 18];
        let r = wilcoxon_signed_rank(&d, &zero, Sidedness::TwoSided).unwrap();
        assert_eq!(r.statistic.value, 12.0);
        assert_eq!(r.sample_sizes, vec![17]);
        assert!((r.p_value.unwrap() - 0.002_424_459_469_788_591_6).abs() < 1e-12);
    }

    #[test]
    fn single_positive_difference() {
        let r = wilcoxon_signed_rank(&[2.0], &[1.0], Sidedness::Greater).unwrap();
        assert_eq!(r.p_value, Some(0.5));
        assert_eq!(
            wilcoxon_signed_rank(&[1.0, 2.0], &[1.0, 2.0], Sidedness::Greater).unwrap_err(),
            StatsError::AllZeroDifferences
        );
    }

    #[test]
    fn kruskal_wallis_with_ties() {
        let g1 = [1.0, 2.0, 3.0, 4.0, 4.0];
        let g2 = [2.0, 5.0, 6.0, 7.0];
        let g3 = [8.0, 8.0, 9.0, 3.5];
        let r = kruskal_wallis(&[&g1, &g2, &g3]).unwrap();
        assert!((r.statistic.value - 5.641_828_254_847_644).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.059_551_480_178_725_11).abs() < 1e-12);
        assert_eq!(kruskal_wallis(&[&g1, &[]]).unwrap_err(), StatsError::EmptyGroup(1));
    }

    #[test]
    fn kruskal_wallis_identical_groups() {
        let g = [1.0, 2.0, 3.0];
        let r = kruskal_wallis(&[&g, &g]).unwrap();
        assert_eq!(r.statistic.value, 0.0);
        assert_eq!(r.p_value, Some(1.0));
    }

    #[test]
    fn friedman_reference() {
        let m = vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 3.0, 4.0],
            vec![3.0, 4.0, 2.0],
            vec![4.0, 3.0, 5.0],
            vec![5.0, 6.0, 7.0],
        ];
        let r = friedman(&m).unwrap();
        assert!((r.statistic.value - 3.6).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.165_298_888_221_586_42).abs() < 1e-12);
    }

    #[test]
    fn dp_counts_sum_to_binomials() {
        assert_eq!(subset_sum_counts(10, 4).iter().sum::<u128>(), 210);
        assert_eq!(signed_rank_counts(12).iter().sum::<u128>(), 4096);
    }
}
