//! Tests of association in contingency tables.

use crate::dist::chi_square_sf;
use crate::error::{Result, StatsError};
use crate::result::{Sidedness, TestKind, TestResult};
use crate::special::ln_gamma;

fn check_table(table: &[Vec<u64>]) -> Result<(usize, usize)> {
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    if rows < 2 || cols < 2 {
        return Err(StatsError::Domain(format!("table must be at least 2x2, got {rows}x{cols}")));
    }
    if table.iter().any(|r| r.len() != cols) {
        return Err(StatsError::Domain("ragged contingency table".into()));
    }
    let zero_row = table.iter().any(|r| r.iter().all(|&c| c == 0));
    let zero_col = (0..cols).any(|j| table.iter().all(|r| r[j] == 0));
    if zero_row || zero_col {
        return Err(StatsError::ZeroMargin);
    }
    Ok((rows, cols))
}

/// Pearson chi-square test of independence, without continuity correction.
/// Effect size is Cramer's V.
pub fn chi_square_test(table: &[Vec<u64>]) -> Result<TestResult> {
    let (rows, cols) = check_table(table)?;
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let col_sums: Vec<f64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum::<u64>() as f64).collect();
    let n: f64 = row_sums.iter().sum();

    let mut chi2 = 0.0;
    let mut small = 0;
    for (i, r) in table.iter().enumerate() {
        for (j, &obs) in r.iter().enumerate() {
            let expected = row_sums[i] * col_sums[j] / n;
            if expected < 5.0 {
                small += 1;
            }
            chi2 += (obs as f64 - expected).powi(2) / expected;
        }
    }
    let df = ((rows - 1) * (cols - 1)) as f64;
    let v = (chi2 / (n * (rows.min(cols) - 1) as f64)).sqrt();

    let mut result = TestResult::new(TestKind::ChiSquare, "chi2", chi2)
        .with_upper_p(chi_square_sf(chi2, df))
        .with_effect("cramers_v", v);
    result.dof = vec![df];
    result.method = "chi-square approximation".into();
    result.sample_sizes = vec![n as usize];
    if small > 0 {
        result.notes.push(format!("{small} cell(s) have expected count below 5"));
    }
    Ok(result)
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Relative slack when collecting tables "as extreme" as the observed one.
const FISHER_RELATIVE_SLACK: f64 = 1e-7;

/// Fisher's exact test on a 2x2 table `[[a, b], [c, d]]`. `Greater` tests
/// for an odds ratio above one, i.e. `P(X >= a)` under the hypergeometric
/// null with fixed margins. Effect size is the sample odds ratio `ad / bc`.
pub fn fisher_exact(table: &[Vec<u64>], side: Sidedness) -> Result<TestResult> {
    let (rows, cols) = check_table(table)?;
    if rows != 2 || cols != 2 {
        return Err(StatsError::NotTwoByTwo { rows, cols });
    }
    let (a, b, c, d) = (table[0][0], table[0][1], table[1][0], table[1][1]);
    let row1 = a + b;
    let col1 = a + c;
    let n = a + b + c + d;
    let lo = col1.saturating_sub(c + d);
    let hi = row1.min(col1);
    let denom = ln_choose(n, col1);
    let pmf = |x: u64| (ln_choose(row1, x) + ln_choose(n - row1, col1 - x) - denom).exp();

    let probs: Vec<(u64, f64)> = (lo..=hi).map(|x| (x, pmf(x))).collect();
    let observed = pmf(a);
    let upper: f64 = probs.iter().filter(|(x, _)| *x >= a).map(|(_, p)| p).sum();
    let lower: f64 = probs.iter().filter(|(x, _)| *x <= a).map(|(_, p)| p).sum();
    let two: f64 = probs.iter().filter(|(_, p)| *p <= observed * (1.0 + FISHER_RELATIVE_SLACK)).map(|(_, p)| p).sum();

    let odds = (a as f64 * d as f64) / (b as f64 * c as f64);
    let mut result = TestResult::new(TestKind::FisherExact, "odds_ratio", odds).with_effect("odds_ratio", odds);
    result.sidedness = side;
    result.p_value = Some(
        match side {
            Sidedness::Greater => upper,
            Sidedness::Less => lower,
            Sidedness::TwoSided => two,
        }
        .clamp(0.0, 1.0),
    );
    result.p_two_sided = Some(two.clamp(0.0, 1.0));
    result.method = "exact".into();
    result.sample_sizes = vec![n as usize];
    Ok(result)
}
