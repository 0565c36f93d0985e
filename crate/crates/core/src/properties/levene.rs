//! Levene's test: one-way ANOVA on absolute deviations from each group's centre.

use assay_stats::bootstrap::quantile_sorted;
use assay_stats::moments::mean;
use assay_stats::{one_way_anova, StatsError};
use serde::{Deserialize, Serialize};

/// Group centre used for the deviations. `Median` gives the Brown-Forsythe variant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Center {
    #[default]
    Mean,
    Median,
}

fn centre(xs: &[f64], how: Center) -> f64 {
    match how {
        Center::Mean => mean(xs),
        Center::Median => {
            let mut s = xs.to_vec();
            s.sort_by(f64::total_cmp);
            quantile_sorted(&s, 0.5)
        }
    }
}

/// Returns `(W, p)` with `W ~ F(k - 1, N - k)` under equal variances.
pub fn levene_test(groups: &[&[f64]], how: Center) -> Result<(f64, f64), StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::Domain(format!("Levene's test needs at least 2 groups, got {}", groups.len())));
    }
    for (i, g) in groups.iter().enumerate() {
        if g.is_empty() {
            return Err(StatsError::EmptyGroup(i));
        }
        if g.len() < 2 {
            return Err(StatsError::InsufficientData { needed: 2, got: g.len() });
        }
    }
    let deviations: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let c = centre(g, how);
            g.iter().map(|v| (v - c).abs()).collect()
        })
        .collect();
    let slices: Vec<&[f64]> = deviations.iter().map(Vec::as_slice).collect();
    let r = one_way_anova(&slices)?;
    Ok((r.statistic.value, r.p_value.unwrap_or(1.0)))
}
