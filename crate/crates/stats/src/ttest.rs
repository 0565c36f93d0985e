//! Student, Welch and paired t-tests.

use crate::dist::{t_cdf, t_sf, Distribution};
use crate::error::{Result, StatsError};
use crate::moments::{mean, require_finite, require_len, sum_sq_dev};
use crate::result::{ConfidenceInterval, Sidedness, TestKind, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TVariant {
    /// Pooled variance, `n1 + n2 - 2` degrees of freedom.
    Student,
    /// Unpooled variance with Welch-Satterthwaite degrees of freedom.
    Welch,
}

/// Two independent samples. `Greater` tests `mean(a) > mean(b)`.
///
/// `level` is the confidence level of the interval reported for the mean
/// difference.
pub fn independent_t(a: &[f64], b: &[f64], variant: TVariant, side: Sidedness, level: f64) -> Result<TestResult> {
    require_len(a, 2)?;
    require_len(b, 2)?;
    require_finite(a)?;
    require_finite(b)?;

    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let diff = mean(a) - mean(b);
    let (ss1, ss2) = (sum_sq_dev(a), sum_sq_dev(b));
    let pooled_var = (ss1 + ss2) / (n1 + n2 - 2.0);

    let (se, dof) = match variant {
        TVariant::Student => ((pooled_var * (1.0 / n1 + 1.0 / n2)).sqrt(), n1 + n2 - 2.0),
        TVariant::Welch => {
            let v1 = ss1 / (n1 - 1.0) / n1;
            let v2 = ss2 / (n2 - 1.0) / n2;
            let dof = (v1 + v2).powi(2) / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
            ((v1 + v2).sqrt(), if dof.is_finite() { dof } else { n1 + n2 - 2.0 })
        }
    };

    let kind = match variant {
        TVariant::Student => TestKind::StudentT,
        TVariant::Welch => TestKind::WelchT,
    };

    let mut notes = Vec::new();
    let (t, upper, lower) = if se > 0.0 {
        let t = diff / se;
        (t, t_sf(t, dof), t_cdf(t, dof))
    } else if diff == 0.0 {
        notes.push("both groups have zero variance and equal means".to_string());
        (0.0, 1.0, 1.0)
    } else {
        notes.push("both groups have zero variance; p-value taken as its limit".to_string());
        if diff > 0.0 {
            (f64::INFINITY, 0.0, 1.0)
        } else {
            (f64::NEG_INFINITY, 1.0, 0.0)
        }
    };

    let mut result =
        TestResult::new(kind, "t", t).with_p(side, upper, lower).with_effect("cohen_d", diff / pooled_var.sqrt());
    result.dof = vec![dof];
    result.method = "t distribution".into();
    result.sample_sizes = vec![a.len(), b.len()];
    result.confidence_interval = Some(mean_interval("mean difference", diff, se, dof, level)?);
    result.notes = notes;
    Ok(result)
}

/// Paired samples: a one-sample t-test on `a[i] - b[i]`.
pub fn paired_t(a: &[f64], b: &[f64], side: Sidedness, level: f64) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(StatsError::Domain(format!("paired samples differ in length ({} vs {})", a.len(), b.len())));
    }
    require_len(a, 2)?;
    require_finite(a)?;
    require_finite(b)?;
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = diffs.len() as f64;
    let mean_diff = mean(&diffs);
    let sd = (sum_sq_dev(&diffs) / (n - 1.0)).sqrt();
    let dof = n - 1.0;

    let (t, upper, lower, note) = if sd > 0.0 {
        let t = mean_diff / (sd / n.sqrt());
        (t, t_sf(t, dof), t_cdf(t, dof), None)
    } else if mean_diff == 0.0 {
        (0.0, 1.0, 1.0, Some("all differences are zero"))
    } else {
        return Err(StatsError::DegenerateSample("all paired differences are equal and nonzero".into()));
    };

    let mut result =
        TestResult::new(TestKind::PairedT, "t", t).with_p(side, upper, lower).with_effect("cohen_d", mean_diff / sd);
    result.dof = vec![dof];
    result.method = "t distribution".into();
    result.sample_sizes = vec![diffs.len()];
    result.confidence_interval = Some(mean_interval("mean difference", mean_diff, sd / n.sqrt(), dof, level)?);
    if let Some(note) = note {
        result.notes.push(note.into());
    }
    Ok(result)
}

fn mean_interval(target: &str, centre: f64, se: f64, dof: f64, level: f64) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::Domain(format!("confidence level must be in (0, 1), got {level}")));
    }
    let q = Distribution::student_t(dof)?.quantile(0.5 + level / 2.0);
    let half = q * se;
    Ok(ConfidenceInterval { target: target.into(), level, lo: centre - half, hi: centre + half })
}
