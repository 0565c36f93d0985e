//! Pearson, Spearman and Kendall correlation tests.

use crate::dist::{normal_cdf, normal_sf, t_cdf, t_sf};
use crate::error::{Result, StatsError};
use crate::moments::{mean, require_finite};
use crate::ranks::average_ranks;
use crate::result::{Sidedness, TestKind, TestResult};

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(StatsError::Domain(format!("variables differ in length ({} vs {})", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(StatsError::InsufficientData { needed: 3, got: x.len() });
    }
    require_finite(x)?;
    require_finite(y)
}

fn product_moment(x: &[f64], y: &[f64]) -> Result<f64> {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateSample("a variable is constant".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// t-test on a correlation coefficient with `n - 2` degrees of freedom.
fn r_result(kind: TestKind, name: &str, r: f64, n: usize, side: Sidedness) -> TestResult {
    let df = (n - 2) as f64;
    let t = if r.abs() == 1.0 { r * f64::INFINITY } else { r * (df / (1.0 - r * r)).sqrt() };
    let mut result = TestResult::new(kind, name, r).with_p(side, t_sf(t, df), t_cdf(t, df)).with_effect(name, r);
    result.dof = vec![df];
    result.method = "t distribution".into();
    result.sample_sizes = vec![n];
    result
}

/// Pearson product-moment correlation. `Greater` tests for a positive
/// association.
pub fn pearson_r(x: &[f64], y: &[f64], side: Sidedness) -> Result<TestResult> {
    check_pair(x, y)?;
    let r = product_moment(x, y)?;
    Ok(r_result(TestKind::Pearson, "r", r, x.len(), side))
}

/// Spearman rank correlation: Pearson's r on average ranks.
pub fn spearman_rho(x: &[f64], y: &[f64], side: Sidedness) -> Result<TestResult> {
    check_pair(x, y)?;
    let (rx, _) = average_ranks(x);
    let (ry, _) = average_ranks(y);
    let rho = product_moment(&rx, &ry)?;
    Ok(r_result(TestKind::Spearman, "rho", rho, x.len(), side))
}

/// Kendall's tau-b with the tie-corrected normal approximation.
pub fn kendall_tau(x: &[f64], y: &[f64], side: Sidedness) -> Result<TestResult> {
    check_pair(x, y)?;
    let n = x.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            s += ((dx * dy).signum() as i64) * i64::from(dx != 0.0 && dy != 0.0);
        }
    }
    let (_, tx) = average_ranks(x);
    let (_, ty) = average_ranks(y);
    let pairs = |t: &[usize]| t.iter().map(|&t| (t * (t.saturating_sub(1))) as f64 / 2.0).sum::<f64>();
    let n0 = (n * (n - 1)) as f64 / 2.0;
    let (n1, n2) = (pairs(&tx), pairs(&ty));
    if n1 == n0 || n2 == n0 {
        return Err(StatsError::DegenerateSample("a variable is constant".into()));
    }
    let tau = (s as f64 / ((n0 - n1) * (n0 - n2)).sqrt()).clamp(-1.0, 1.0);

    let nf = n as f64;
    let sum = |t: &[usize], f: &dyn Fn(f64) -> f64| t.iter().map(|&t| f(t as f64)).sum::<f64>();
    let v0 = nf * (nf - 1.0) * (2.0 * nf + 5.0);
    let vt = sum(&tx, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let vu = sum(&ty, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let v1 = sum(&tx, &|t| t * (t - 1.0)) * sum(&ty, &|t| t * (t - 1.0));
    let v2 = sum(&tx, &|t| t * (t - 1.0) * (t - 2.0)) * sum(&ty, &|t| t * (t - 1.0) * (t - 2.0));
    let var = (v0 - vt - vu) / 18.0 + v1 / (2.0 * nf * (nf - 1.0)) + v2 / (9.0 * nf * (nf - 1.0) * (nf - 2.0));
    let z = s as f64 / var.sqrt();

    let mut result = TestResult::new(TestKind::Kendall, "tau", tau)
        .with_p(side, normal_sf(z), normal_cdf(z))
        .with_effect("tau", tau);
    result.method = "normal approximation".into();
    result.sample_sizes = vec![n];
    result.notes.push(format!("z = {z:.4}"));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: [f64; 8] = [1.2, 2.3, 2.9, 4.1, 5.0, 6.2, 6.8, 8.1];
    const Y: [f64; 8] = [2.0, 2.1, 3.5, 3.9, 6.1, 5.8, 7.9, 7.7];
    const XT: [f64; 8] = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 5.0, 6.0];
    const YT: [f64; 8] = [1.0, 3.0, 2.0, 2.0, 5.0, 4.0, 6.0, 6.0];

    // references from scipy.stats.pearsonr / spearmanr / kendalltau
    #[test]
    fn pearson_matches_reference() {
        let r = pearson_r(&X, &Y, Sidedness::TwoSided).unwrap();
        assert!((r.statistic.value - 0.960_479_426_038_715_3).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.000_149_777_740_276_019_22).abs() < 1e-12);
    }

    #[test]
    fn spearman_matches_reference() {
        let r = spearman_rho(&X, &Y, Sidedness::TwoSided).unwrap();
        assert!((r.statistic.value - 0.952_380_952_380_952_4).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.000_260_400_024_387_251_05).abs() < 1e-12);
        let r = spearman_rho(&XT, &YT, Sidedness::TwoSided).unwrap();
        assert!((r.statistic.value - 0.932_926_829_268_292_8).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.000_716_934_059_228_526_3).abs() < 1e-12);
    }

    #[test]
    fn kendall_with_ties_matches_reference() {
        let r = kendall_tau(&XT, &YT, Sidedness::TwoSided).unwrap();
        assert!((r.statistic.value - 0.846_153_846_153_846_3).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.005_017_926_146_218_106).abs() < 1e-12);
        let g = kendall_tau(&XT, &YT, Sidedness::Greater).unwrap();
        assert!((g.p_value.unwrap() - 0.002_508_963_073_109_053).abs() < 1e-12);
    }

    #[test]
    fn perfect_correlation() {
        let r = pearson_r(&X, &X, Sidedness::Greater).unwrap();
        assert_eq!(r.statistic.value, 1.0);
        assert_eq!(r.p_value, Some(0.0));
    }

    #[test]
    fn constant_variable_is_degenerate() {
        assert!(matches!(
            pearson_r(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], Sidedness::TwoSided),
            Err(StatsError::DegenerateSample(_))
        ));
        assert!(kendall_tau(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0], Sidedness::TwoSided).is_err());
    }
}
