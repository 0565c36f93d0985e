//! Analysis of variance: one-way, repeated measures and factorial designs.
//!
//! Factorial designs use Type II sums of squares. Each term is tested
//! against the model holding every other term that does not contain it, so
//! main effects are adjusted for each other but not for their interaction.
//! Fits use treatment (dummy) coding and an SVD least-squares solve.

use nalgebra::{DMatrix, DVector};

use crate::dist::f_sf;
use crate::error::{Result, StatsError};
use crate::moments::{mean, require_finite, sum_sq_dev};
use crate::result::{AnovaRow, TestKind, TestResult};

/// F ratio with the conventions for an error term of zero: `0/0` is 0 and
/// anything else over 0 is infinite.
fn f_ratio(ss: f64, df: f64, ss_err: f64, df_err: f64) -> (f64, f64) {
    if ss_err > 0.0 {
        let f = (ss / df) / (ss_err / df_err);
        (f, f_sf(f, df, df_err))
    } else if ss > 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        (0.0, 1.0)
    }
}

fn row(effect: &str, ss: f64, df: f64, ss_err: f64, df_err: f64) -> AnovaRow {
    let (f, p) = f_ratio(ss, df, ss_err, df_err);
    let total = ss + ss_err;
    AnovaRow {
        effect: effect.to_string(),
        df,
        sum_sq: ss,
        mean_sq: ss / df,
        f: Some(f),
        p_value: Some(p),
        partial_eta_squared: (total > 0.0).then(|| ss / total),
    }
}

fn residual_row(ss: f64, df: f64) -> AnovaRow {
    AnovaRow {
        effect: "Residual".into(),
        df,
        sum_sq: ss,
        mean_sq: ss / df,
        f: None,
        p_value: None,
        partial_eta_squared: None,
    }
}

fn from_table(kind: TestKind, table: Vec<AnovaRow>, effect_name: &str, effect: f64) -> TestResult {
    let first = &table[0];
    let residual_df = table.last().map(|r| r.df).unwrap_or(f64::NAN);
    let mut result = TestResult::new(kind, "F", first.f.unwrap_or(f64::NAN))
        .with_upper_p(first.p_value.unwrap_or(f64::NAN))
        .with_effect(effect_name, effect);
    result.dof = vec![first.df, residual_df];
    result.method = "F distribution".into();
    result.anova_table = table;
    result
}

fn check_groups(groups: &[&[f64]], min_size: usize) -> Result<()> {
    if groups.len() < 2 {
        return Err(StatsError::Domain(format!("need at least 2 groups, got {}", groups.len())));
    }
    for (i, g) in groups.iter().enumerate() {
        if g.is_empty() {
            return Err(StatsError::EmptyGroup(i));
        }
        if g.len() < min_size {
            return Err(StatsError::InsufficientData { needed: min_size, got: g.len() });
        }
        require_finite(g)?;
    }
    Ok(())
}

/// One-way ANOVA across independent groups. Effect size is eta squared.
pub fn one_way_anova(groups: &[&[f64]]) -> Result<TestResult> {
    check_groups(groups, 2)?;
    let all: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let grand = mean(&all);
    let ss_between: f64 = groups.iter().map(|g| g.len() as f64 * (mean(g) - grand).powi(2)).sum();
    let ss_within: f64 = groups.iter().map(|g| sum_sq_dev(g)).sum();
    let df1 = (groups.len() - 1) as f64;
    let df2 = (all.len() - groups.len()) as f64;
    let table = vec![row("group", ss_between, df1, ss_within, df2), residual_row(ss_within, df2)];
    let total = ss_between + ss_within;
    let eta = if total > 0.0 { ss_between / total } else { f64::NAN };
    let mut result = from_table(TestKind::FTest, table, "eta_squared", eta);
    result.sample_sizes = groups.iter().map(|g| g.len()).collect();
    Ok(result)
}

/// Repeated measures ANOVA on a units x conditions matrix. Effect size is
/// partial eta squared.
pub fn rm_one_way_anova(matrix: &[Vec<f64>]) -> Result<TestResult> {
    if matrix.is_empty() {
        return Err(StatsError::NoCompleteUnits);
    }
    let k = matrix[0].len();
    if k < 2 {
        return Err(StatsError::Domain(format!("need at least 2 conditions, got {k}")));
    }
    if let Some(r) = matrix.iter().find(|r| r.len() != k) {
        return Err(StatsError::Domain(format!("ragged matrix: row of {} in {k} columns", r.len())));
    }
    let n = matrix.len();
    if n < 2 {
        return Err(StatsError::InsufficientData { needed: 2, got: n });
    }
    for r in matrix {
        require_finite(r)?;
    }
    let all: Vec<f64> = matrix.iter().flatten().copied().collect();
    let grand = mean(&all);
    let (nf, kf) = (n as f64, k as f64);
    let col_means: Vec<f64> = (0..k).map(|j| mean(&matrix.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    let row_means: Vec<f64> = matrix.iter().map(|r| mean(r)).collect();
    let ss_cond: f64 = col_means.iter().map(|m| nf * (m - grand).powi(2)).sum();
    let mut ss_err = 0.0;
    for (r, rm) in matrix.iter().zip(&row_means) {
        for (x, cm) in r.iter().zip(&col_means) {
            ss_err += (x - rm - cm + grand).powi(2);
        }
    }
    let df_cond = kf - 1.0;
    let df_err = (nf - 1.0) * (kf - 1.0);
    let table = vec![row("condition", ss_cond, df_cond, ss_err, df_err), residual_row(ss_err, df_err)];
    let partial = table[0].partial_eta_squared.unwrap_or(f64::NAN);
    let mut result = from_table(TestKind::RmOneWayAnova, table, "partial_eta_squared", partial);
    result.sample_sizes = vec![n; k];
    Ok(result)
}

/// A categorical predictor coded `0..levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub name: String,
    pub codes: Vec<usize>,
    pub levels: usize,
}

const MAX_FACTORS: usize = 4;

/// Full factorial ANOVA with Type II sums of squares. The returned statistic,
/// p-value and effect size belong to the first factor; the ANOVA table lists
/// every main effect and interaction.
pub fn factorial_anova(y: &[f64], factors: &[Factor]) -> Result<TestResult> {
    if factors.is_empty() || factors.len() > MAX_FACTORS {
        return Err(StatsError::Domain(format!(
            "factorial ANOVA takes 1 to {MAX_FACTORS} factors, got {}",
            factors.len()
        )));
    }
    require_finite(y)?;
    for f in factors {
        if f.codes.len() != y.len() {
            return Err(StatsError::Domain(format!("factor {} has the wrong length", f.name)));
        }
        if f.levels < 2 {
            return Err(StatsError::Domain(format!("factor {} has fewer than 2 levels", f.name)));
        }
        if let Some(c) = f.codes.iter().find(|&&c| c >= f.levels) {
            return Err(StatsError::Domain(format!("factor {} has code {c} out of range", f.name)));
        }
    }

    if factors.len() == 1 {
        let f = &factors[0];
        let mut groups = vec![Vec::new(); f.levels];
        for (v, &c) in y.iter().zip(&f.codes) {
            groups[c].push(*v);
        }
        let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
        let mut result = one_way_anova(&refs)?.with_test(TestKind::FactorialAnova);
        result.anova_table[0].effect = f.name.clone();
        let partial = result.anova_table[0].partial_eta_squared.unwrap_or(f64::NAN);
        result = result.with_effect("partial_eta_squared", partial);
        return Ok(result);
    }

    // cells in mixed radix over factor levels
    let n_cells: usize = factors.iter().map(|f| f.levels).product();
    let mut cells: Vec<Vec<f64>> = vec![Vec::new(); n_cells];
    for (i, v) in y.iter().enumerate() {
        cells[cell_index(factors, i)].push(*v);
    }
    if let Some(empty) = cells.iter().position(Vec::is_empty) {
        return Err(empty_cell(factors, empty));
    }
    let df_res = y.len() as f64 - n_cells as f64;
    if df_res < 1.0 {
        return Err(StatsError::InsufficientData { needed: n_cells + 1, got: y.len() });
    }
    let ss_res: f64 = cells.iter().map(|c| sum_sq_dev(c)).sum();

    let grand = mean(y);
    let centred = DVector::from_iterator(y.len(), y.iter().map(|v| v - grand));
    let ss_total = centred.norm_squared();

    // terms are nonempty subsets of factors as bitmasks, main effects first
    let mut terms: Vec<u32> = (1..(1u32 << factors.len())).collect();
    terms.sort_by_key(|t| (t.count_ones(), *t));

    let mut table = Vec::with_capacity(terms.len() + 1);
    for &term in &terms {
        let others: Vec<u32> = terms.iter().copied().filter(|&s| s & term != term).collect();
        let reduced = rss(&centred, factors, &others);
        let mut with_term = others.clone();
        with_term.push(term);
        let fuller = rss(&centred, factors, &with_term);
        let mut ss = (reduced - fuller).max(0.0);
        if ss <= 1e-12 * ss_total {
            ss = 0.0;
        }
        let df: f64 =
            (0..factors.len()).filter(|i| term & (1 << i) != 0).map(|i| (factors[i].levels - 1) as f64).product();
        table.push(row(&term_name(factors, term), ss, df, ss_res, df_res));
    }
    table.push(residual_row(ss_res, df_res));

    let partial = table[0].partial_eta_squared.unwrap_or(f64::NAN);
    let mut result = from_table(TestKind::FactorialAnova, table, "partial_eta_squared", partial);
    result.sample_sizes = cells.iter().map(Vec::len).collect();
    Ok(result)
}

fn cell_index(factors: &[Factor], i: usize) -> usize {
    factors.iter().fold(0, |acc, f| acc * f.levels + f.codes[i])
}

fn empty_cell(factors: &[Factor], index: usize) -> StatsError {
    let mut coords = Vec::with_capacity(factors.len());
    let mut rest = index;
    for f in factors.iter().rev() {
        coords.push(rest % f.levels);
        rest /= f.levels;
    }
    coords.reverse();
    if coords.len() == 2 {
        StatsError::EmptyCell(coords[0], coords[1])
    } else {
        StatsError::Domain(format!("empty design cell at levels {coords:?}"))
    }
}

fn term_name(factors: &[Factor], term: u32) -> String {
    (0..factors.len()).filter(|i| term & (1 << i) != 0).map(|i| factors[i].name.as_str()).collect::<Vec<_>>().join(":")
}

/// Dummy columns for a term: products over its factors of level indicators
/// for levels `1..L`.
fn term_columns(factors: &[Factor], term: u32, n: usize) -> Vec<DVector<f64>> {
    let mut cols = vec![DVector::from_element(n, 1.0)];
    for (i, f) in factors.iter().enumerate() {
        if term & (1 << i) == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(cols.len() * (f.levels - 1));
        for col in &cols {
            for level in 1..f.levels {
                next.push(DVector::from_fn(n, |r, _| if f.codes[r] == level { col[r] } else { 0.0 }));
            }
        }
        cols = next;
    }
    cols
}

/// Residual sum of squares of centred `y` on an intercept plus `terms`.
fn rss(y: &DVector<f64>, factors: &[Factor], terms: &[u32]) -> f64 {
    let n = y.len();
    let mut cols = vec![DVector::from_element(n, 1.0)];
    for &t in terms {
        cols.extend(term_columns(factors, t, n));
    }
    let x = DMatrix::from_columns(&cols);
    let svd = x.clone().svd(true, true);
    match svd.solve(y, 1e-10) {
        Ok(beta) => (y - x * beta).norm_squared(),
        Err(_) => f64::NAN,
    }
}
