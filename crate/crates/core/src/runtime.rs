//! Executes a selected test on the data an analysis spec describes.

use assay_stats::{
    bootstrap_ci, chi_square_test, factorial_anova, fisher_exact, friedman, independent_t, kendall_tau, kruskal_wallis,
    mann_whitney_u, one_way_anova, paired_t, pearson_r, rm_one_way_anova, spearman_rho, wilcoxon_signed_rank,
    BootstrapConfig, Factor, Sidedness, StatsError, TVariant, TestKind, TestResult,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{DataError, Dataset};
use crate::properties::Bindings;
use crate::speclang::{HypothesisDecl, Relation, Sign, ValidatedSpec};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_RESAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub seed: u64,
    pub resamples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, resamples: DEFAULT_RESAMPLES }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExecError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{0}")]
    Shape(String),
}

/// A test result plus how much of the data it left out: rows with missing
/// values, or for within-subjects tests, units lacking a complete set.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub result: TestResult,
    pub excluded: usize,
}

pub fn relation_sidedness(relation: Relation) -> Sidedness {
    match relation {
        Relation::Greater => Sidedness::Greater,
        Relation::Less => Sidedness::Less,
        Relation::NotEqual => Sidedness::TwoSided,
    }
}

pub fn sign_sidedness(sign: Sign) -> Sidedness {
    match sign {
        Sign::Positive => Sidedness::Greater,
        Sign::Negative => Sidedness::Less,
        Sign::Nonzero => Sidedness::TwoSided,
    }
}

fn position(labels: &[String], label: &str) -> Result<usize, ExecError> {
    labels.iter().position(|l| l == label).ok_or_else(|| ExecError::Shape(format!("no data for category `{label}`")))
}

fn omnibus_note(k: usize, factor: &str) -> Option<String> {
    (k > 2).then(|| format!("omnibus test across all {k} levels of {factor}; not specific to the hypothesized pair"))
}

pub fn execute_test(
    spec: &ValidatedSpec,
    data: &Dataset,
    test: TestKind,
    options: &RunOptions,
) -> Result<Execution, ExecError> {
    let level = 1.0 - spec.alpha();
    match &spec.spec.hypothesis {
        HypothesisDecl::GroupComparison { dependent, independent, left, right, relation } => {
            let side = relation_sidedness(*relation);
            comparison(spec, data, test, options, level, (dependent, independent, left, right), side)
        }
        HypothesisDecl::LinearRelationship { sign, .. } => {
            let b = Bindings::from_spec(spec);
            linear(data, test, options, level, (&b.x[0], &b.y[0]), sign_sidedness(*sign))
        }
    }
}

type Comparison<'a> = (&'a String, &'a String, &'a String, &'a String);

fn comparison(
    spec: &ValidatedSpec,
    data: &Dataset,
    test: TestKind,
    options: &RunOptions,
    level: f64,
    (outcome, factor, left, right): Comparison<'_>,
    side: Sidedness,
) -> Result<Execution, ExecError> {
    use TestKind::*;
    let done = |result: TestResult, excluded: usize| Ok(Execution { result, excluded });
    match test {
        StudentT | WelchT | MannWhitneyU => {
            let g = data.group_samples(outcome, factor)?;
            let (a, b) = (&g.groups[position(&g.labels, left)?], &g.groups[position(&g.labels, right)?]);
            let result = match test {
                StudentT => independent_t(a, b, TVariant::Student, side, level)?,
                WelchT => independent_t(a, b, TVariant::Welch, side, level)?,
                _ => mann_whitney_u(a, b, side)?,
            };
            done(result, g.dropped)
        }
        PairedT | WilcoxonSignedRank => {
            let p = data.pair_samples(outcome, factor)?;
            let (li, ri) = (position(&p.conditions, left)?, position(&p.conditions, right)?);
            let a: Vec<f64> = p.matrix.iter().map(|r| r[li]).collect();
            let b: Vec<f64> = p.matrix.iter().map(|r| r[ri]).collect();
            let result = match test {
                PairedT => paired_t(&a, &b, side, level)?,
                _ => wilcoxon_signed_rank(&a, &b, side)?,
            };
            done(result, p.excluded_units + p.skipped_rows)
        }
        FTest | KruskalWallis => {
            let g = data.group_samples(outcome, factor)?;
            let slices = g.as_slices();
            let mut result = if test == FTest { one_way_anova(&slices)? } else { kruskal_wallis(&slices)? };
            result.notes.extend(omnibus_note(slices.len(), factor));
            done(result, g.dropped)
        }
        RmOneWayAnova | Friedman => {
            let p = data.pair_samples(outcome, factor)?;
            let mut result = if test == Friedman { friedman(&p.matrix)? } else { rm_one_way_anova(&p.matrix)? };
            result.notes.extend(omnibus_note(p.conditions.len(), factor));
            done(result, p.excluded_units + p.skipped_rows)
        }
        TwoWayAnova | FactorialAnova => {
            let design = Bindings::from_spec(spec).design;
            let names: Vec<&str> = design.iter().map(String::as_str).collect();
            let cells = data.cell_samples(outcome, &names)?;
            let factors: Vec<Factor> = names
                .iter()
                .zip(&cells.codes)
                .zip(&cells.levels)
                .map(|((n, c), l)| Factor { name: n.to_string(), codes: c.clone(), levels: l.len() })
                .collect();
            let mut result = factorial_anova(&cells.y, &factors)?.with_test(test);
            result.notes.extend(omnibus_note(cells.levels[0].len(), factor));
            done(result, cells.dropped)
        }
        ChiSquare => {
            let t = data.crosstab(factor, outcome)?;
            done(chi_square_test(&t.counts)?, t.dropped)
        }
        FisherExact => {
            let t = data.crosstab(factor, outcome)?;
            if t.counts.len() != 2 || t.col_labels.len() != 2 {
                return Err(StatsError::NotTwoByTwo { rows: t.counts.len(), cols: t.col_labels.len() }.into());
            }
            // rows: left, right; columns: second outcome category, first
            let row = |i: usize| vec![t.counts[i][1], t.counts[i][0]];
            let table = vec![row(position(&t.row_labels, left)?), row(position(&t.row_labels, right)?)];
            let mut result = fisher_exact(&table, side)?;
            result.notes.push(format!("odds of {outcome} = {} in {left} relative to {right}", t.col_labels[1]));
            done(result, t.dropped)
        }
        Pearson | Pointbiserial | Spearman | Kendall => {
            Err(ExecError::Shape(format!("{} needs a linear-relationship hypothesis", test.display_name())))
        }
        Bootstrap => {
            let g = data.group_samples(outcome, factor)?;
            let groups: Vec<(&str, &[f64])> = g.labels.iter().map(String::as_str).zip(g.as_slices()).collect();
            let contrast = (position(&g.labels, left)?, position(&g.labels, right)?);
            let config = BootstrapConfig { resamples: options.resamples, level, seed: options.seed };
            done(bootstrap_ci(&groups, Some(contrast), &config)?, g.dropped)
        }
    }
}

fn linear(
    data: &Dataset,
    test: TestKind,
    options: &RunOptions,
    level: f64,
    (x, y): (&String, &String),
    side: Sidedness,
) -> Result<Execution, ExecError> {
    use TestKind::*;
    match test {
        Pearson | Pointbiserial | Spearman | Kendall => {
            let c = data.paired_columns(x, y)?;
            let result = match test {
                Pearson => pearson_r(&c.x, &c.y, side)?,
                Pointbiserial => pearson_r(&c.x, &c.y, side)?.with_test(Pointbiserial),
                Spearman => spearman_rho(&c.x, &c.y, side)?,
                _ => kendall_tau(&c.x, &c.y, side)?,
            };
            Ok(Execution { result, excluded: c.dropped })
        }
        Bootstrap => {
            let config = BootstrapConfig { resamples: options.resamples, level, seed: options.seed };
            match data.group_samples(x, y) {
                Ok(g) => {
                    let groups: Vec<(&str, &[f64])> = g.labels.iter().map(String::as_str).zip(g.as_slices()).collect();
                    // second category minus first, so a positive estimate matches a positive sign
                    let contrast = (groups.len() == 2).then_some((1, 0));
                    Ok(Execution { result: bootstrap_ci(&groups, contrast, &config)?, excluded: g.dropped })
                }
                Err(DataError::NotCategorical(_)) => {
                    let c = data.paired_columns(x, y)?;
                    let groups = [(x.as_str(), c.x.as_slice()), (y.as_str(), c.y.as_slice())];
                    let mut result = bootstrap_ci(&groups, None, &config)?;
                    result.notes.push("no grouping variable; intervals are for each mean".into());
                    Ok(Execution { result, excluded: c.dropped })
                }
                Err(e) => Err(e.into()),
            }
        }
        _ => Err(ExecError::Shape(format!("{} needs a group-comparison hypothesis", test.display_name()))),
    }
}
