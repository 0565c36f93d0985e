//! Percentile bootstrap intervals for group means and a difference of means.
//!
//! Resample `i` draws from its own ChaCha8 stream (`seed`, stream `i`), so
//! results are identical whatever the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, StatsError};
use crate::moments::{mean, require_finite, require_len};
use crate::result::{BootstrapSummary, ConfidenceInterval, DifferenceInterval, GroupInterval, TestKind, TestResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

pub const MIN_RESAMPLES: usize = 1000;

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { resamples: 10_000, level: 0.95, seed: 0 }
    }
}

/// Linear-interpolation quantile of sorted data (type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn resample_mean(rng: &mut ChaCha8Rng, xs: &[f64]) -> f64 {
    let n = xs.len();
    (0..n).map(|_| xs[rng.random_range(0..n)]).sum::<f64>() / n as f64
}

fn interval(mut draws: Vec<f64>, level: f64) -> (f64, f64) {
    draws.sort_by(f64::total_cmp);
    let alpha = 1.0 - level;
    (quantile_sorted(&draws, alpha / 2.0), quantile_sorted(&draws, 1.0 - alpha / 2.0))
}

/// Bootstrap the mean of every group. With `contrast = Some((i, j))` the
/// interval for `mean(i) - mean(j)` is also computed and decides
/// significance (the interval excludes zero).
pub fn bootstrap_ci(
    groups: &[(&str, &[f64])],
    contrast: Option<(usize, usize)>,
    config: &BootstrapConfig,
) -> Result<TestResult> {
    if groups.is_empty() {
        return Err(StatsError::Domain("bootstrap needs at least one group".into()));
    }
    if config.resamples < MIN_RESAMPLES {
        return Err(StatsError::Domain(format!("need at least {MIN_RESAMPLES} resamples, got {}", config.resamples)));
    }
    if !(config.level > 0.0 && config.level < 1.0) {
        return Err(StatsError::Domain(format!("confidence level must be in (0, 1), got {}", config.level)));
    }
    for (i, (_, xs)) in groups.iter().enumerate() {
        if xs.is_empty() {
            return Err(StatsError::EmptyGroup(i));
        }
        require_len(xs, 2)?;
        require_finite(xs)?;
    }
    if let Some((i, j)) = contrast {
        if i >= groups.len() || j >= groups.len() || i == j {
            return Err(StatsError::Domain(format!("invalid contrast ({i}, {j})")));
        }
    }

    let draws: Vec<Vec<f64>> = (0..config.resamples)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(index as u64);
            groups.iter().map(|(_, xs)| resample_mean(&mut rng, xs)).collect()
        })
        .collect();

    let group_intervals: Vec<GroupInterval> = groups
        .iter()
        .enumerate()
        .map(|(g, (label, xs))| {
            let (lo, hi) = interval(draws.iter().map(|d| d[g]).collect(), config.level);
            GroupInterval { label: label.to_string(), n: xs.len(), mean: mean(xs), lo, hi }
        })
        .collect();

    let difference = contrast.map(|(i, j)| {
        let (lo, hi) = interval(draws.iter().map(|d| d[i] - d[j]).collect(), config.level);
        DifferenceInterval {
            left: groups[i].0.to_string(),
            right: groups[j].0.to_string(),
            estimate: mean(groups[i].1) - mean(groups[j].1),
            lo,
            hi,
        }
    });
    let significant = difference.as_ref().is_some_and(|d| d.lo > 0.0 || d.hi < 0.0);

    let (name, value) = match &difference {
        Some(d) => ("mean difference", d.estimate),
        None => ("mean", group_intervals[0].mean),
    };
    let mut result = TestResult::new(TestKind::Bootstrap, name, value);
    result.method = "percentile bootstrap".into();
    result.sample_sizes = groups.iter().map(|(_, xs)| xs.len()).collect();
    result.confidence_interval = Some(match &difference {
        Some(d) => ConfidenceInterval { target: name.into(), level: config.level, lo: d.lo, hi: d.hi },
        None => ConfidenceInterval {
            target: format!("mean of {}", group_intervals[0].label),
            level: config.level,
            lo: group_intervals[0].lo,
            hi: group_intervals[0].hi,
        },
    });
    result.bootstrap = Some(BootstrapSummary {
        resamples: config.resamples,
        seed: config.seed,
        level: config.level,
        groups: group_intervals,
        difference,
        significant,
    });
    Ok(result)
}
