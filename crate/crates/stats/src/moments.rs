use crate::error::{Result, StatsError};

/// Arithmetic mean. Constant samples return their value exactly so that
/// deviations from the mean are exactly zero.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let first = xs[0];
    if xs.iter().all(|&x| x == first) {
        return first;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sum of squared deviations from the mean.
pub fn sum_sq_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Sample variance (denominator `n - 1`).
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    sum_sq_dev(xs) / (xs.len() - 1) as f64
}

pub(crate) fn require_finite(xs: &[f64]) -> Result<()> {
    match xs.iter().find(|x| !x.is_finite()) {
        Some(bad) => Err(StatsError::Domain(format!("non-finite observation {bad}"))),
        None => Ok(()),
    }
}

pub(crate) fn require_len(xs: &[f64], needed: usize) -> Result<()> {
    if xs.len() < needed {
        Err(StatsError::InsufficientData { needed, got: xs.len() })
    } else {
        Ok(())
    }
}
