//! Hypothesis tests and the special functions behind them.
//!
//! Every test returns a [`TestResult`] carrying the statistic, degrees of
//! freedom, the p-value in the requested direction, the two-sided p-value,
//! an effect size and, where one is defined, a confidence interval.

pub mod anova;
pub mod bootstrap;
pub mod contingency;
pub mod correlation;
pub mod dist;
mod error;
pub mod float;
pub mod moments;
pub mod nonparametric;
pub mod ranks;
mod result;
pub mod special;
pub mod ttest;

pub use anova::{factorial_anova, one_way_anova, rm_one_way_anova, Factor};
pub use bootstrap::{bootstrap_ci, BootstrapConfig};
pub use contingency::{chi_square_test, fisher_exact};
pub use correlation::{kendall_tau, pearson_r, spearman_rho};
pub use dist::Distribution;
pub use error::{Result, StatsError};
pub use nonparametric::{
    friedman, kruskal_wallis, mann_whitney_u, mann_whitney_u_with, wilcoxon_signed_rank, wilcoxon_signed_rank_with,
    RankTestConfig,
};
pub use result::{
    AnovaRow, BootstrapSummary, ConfidenceInterval, DifferenceInterval, EffectSize, GroupInterval, Sidedness,
    Statistic, TestKind, TestResult,
};
pub use ttest::{independent_t, paired_t, TVariant};
