//! Shapiro-Wilk W with Royston's (1995) coefficient and p-value
//! approximations (algorithm AS R94).

use std::f64::consts::PI;

use assay_stats::dist::normal_sf;
use assay_stats::moments::mean;
use assay_stats::special::inverse_normal_cdf;
use assay_stats::StatsError;

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const G: [f64; 2] = [-2.273, 0.459];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

/// Coefficients for the upper half of the order statistics, largest first.
fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let nf = n as f64;
    // m[i] is the expected normal score of the (n - i)-th order statistic
    let m: Vec<f64> = (0..half).map(|i| -inverse_normal_cdf((i as f64 + 1.0 - 0.375) / (nf + 0.25))).collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let u = 1.0 / nf.sqrt();

    let mut a = vec![0.0; half];
    a[0] = m[0] / ssumm2 + poly(&C1, u);
    let (start, phi) = if n > 5 {
        a[1] = m[1] / ssumm2 + poly(&C2, u);
        let phi = (summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]);
        (2, phi)
    } else {
        (1, (summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a[0] * a[0]))
    };
    let scale = phi.sqrt();
    for i in start..half {
        a[i] = m[i] / scale;
    }
    a
}

fn p_value(w: f64, n: usize) -> f64 {
    let nf = n as f64;
    if n == 3 {
        let p = 6.0 / PI * (w.sqrt().asin() - 0.75f64.sqrt().asin());
        return p.clamp(0.0, 1.0);
    }
    let y = (1.0 - w).ln();
    if n <= 11 {
        let gamma = poly(&G, nf);
        if y >= gamma {
            return 0.0;
        }
        let y = -(gamma - y).ln();
        let m = poly(&C3, nf);
        let s = poly(&C4, nf).exp();
        normal_sf((y - m) / s)
    } else {
        let ln_n = nf.ln();
        let m = poly(&C5, ln_n);
        let s = poly(&C6, ln_n).exp();
        normal_sf((y - m) / s)
    }
}

/// Returns `(W, p)`.
pub fn shapiro_wilk(sample: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = sample.len();
    if n < MIN_N {
        return Err(StatsError::InsufficientData { needed: MIN_N, got: n });
    }
    if n > MAX_N {
        return Err(StatsError::Domain(format!("Shapiro-Wilk supports at most {MAX_N} observations, got {n}")));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::Domain("sample contains a non-finite value".into()));
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range <= 0.0 {
        return Err(StatsError::DegenerateSample("all values are identical".into()));
    }
    let centre = mean(&x);
    let z: Vec<f64> = x.iter().map(|v| (v - centre) / range).collect();
    let ss: f64 = z.iter().map(|v| v * v).sum();
    let a = coefficients(n);
    let num: f64 = a.iter().enumerate().map(|(i, ai)| ai * (z[n - 1 - i] - z[i])).sum();
    let w = (num * num / ss).min(1.0);
    Ok((w, p_value(w, n)))
}
