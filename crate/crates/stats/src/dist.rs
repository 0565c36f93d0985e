//! Continuous reference distributions used to turn statistics into p-values.
//!
//! Student t and F are transforms of the regularized incomplete beta
//! function, chi-square is the incomplete gamma function and the standard
//! normal goes through `erfc`. Each distribution exposes both `cdf` and
//! `sf` (upper tail) so that tiny p-values keep their precision.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StatsError};
use crate::special::{erfc, inc_beta_pair, inc_gamma_pair, inverse_normal_cdf};

/// A reference distribution with validated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Distribution {
    StandardNormal,
    StudentT { df: f64 },
    F { df1: f64, df2: f64 },
    ChiSquare { df: f64 },
}

fn check_dof(df: f64) -> Result<()> {
    if df > 0.0 && !df.is_nan() {
        Ok(())
    } else {
        Err(StatsError::Domain(format!("degrees of freedom must be > 0, got {df}")))
    }
}

impl Distribution {
    pub fn student_t(df: f64) -> Result<Self> {
        check_dof(df)?;
        Ok(Self::StudentT { df })
    }

    pub fn f(df1: f64, df2: f64) -> Result<Self> {
        check_dof(df1)?;
        check_dof(df2)?;
        Ok(Self::F { df1, df2 })
    }

    pub fn chi_square(df: f64) -> Result<Self> {
        check_dof(df)?;
        Ok(Self::ChiSquare { df })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::StandardNormal => normal_cdf(x),
            Self::StudentT { df } => t_tails(x, df).0,
            Self::F { df1, df2 } => f_tails(x, df1, df2).0,
            Self::ChiSquare { df } => chi_square_tails(x, df).0,
        }
    }

    /// Survival function `1 - cdf(x)`, evaluated without cancellation.
    pub fn sf(&self, x: f64) -> f64 {
        match *self {
            Self::StandardNormal => normal_sf(x),
            Self::StudentT { df } => t_tails(x, df).1,
            Self::F { df1, df2 } => f_tails(x, df1, df2).1,
            Self::ChiSquare { df } => chi_square_tails(x, df).1,
        }
    }

    /// Quantile function. Uses the closed form for the normal and bisection
    /// on the CDF otherwise.
    pub fn quantile(&self, p: f64) -> f64 {
        if !(0.0..=1.0).contains(&p) {
            return f64::NAN;
        }
        match *self {
            Self::StandardNormal => inverse_normal_cdf(p),
            Self::StudentT { .. } => {
                if p == 0.5 {
                    return 0.0;
                }
                self.bisect(p, f64::NEG_INFINITY, f64::INFINITY)
            }
            Self::F { .. } | Self::ChiSquare { .. } => self.bisect(p, 0.0, f64::INFINITY),
        }
    }

    fn bisect(&self, p: f64, lower_support: f64, upper_support: f64) -> f64 {
        if p == 0.0 {
            return lower_support;
        }
        if p == 1.0 {
            return upper_support;
        }
        let mut hi = 1.0;
        while self.cdf(hi) < p {
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        let mut lo = if lower_support.is_infinite() { -1.0 } else { lower_support };
        while lower_support.is_infinite() && self.cdf(lo) > p {
            lo *= 2.0;
            if lo < -1e300 {
                return f64::NEG_INFINITY;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal upper tail.
pub fn normal_sf(z: f64) -> f64 {
    normal_cdf(-z)
}

fn t_tails(t: f64, df: f64) -> (f64, f64) {
    if t.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if t.is_infinite() || t.abs() > 1e150 {
        return if t > 0.0 { (1.0, 0.0) } else { (0.0, 1.0) };
    }
    let t2 = t * t;
    let x = df / (df + t2);
    let y = t2 / (df + t2);
    // I_x(df/2, 1/2) is the two-sided tail mass
    let (two_tail, _) = inc_beta_pair(0.5 * df, 0.5, x, y);
    let tail = 0.5 * two_tail;
    if t > 0.0 {
        (1.0 - tail, tail)
    } else {
        (tail, 1.0 - tail)
    }
}

/// Student t CDF with `df` degrees of freedom (fractional allowed).
pub fn t_cdf(t: f64, df: f64) -> f64 {
    t_tails(t, df).0
}

/// Student t upper tail.
pub fn t_sf(t: f64, df: f64) -> f64 {
    t_tails(t, df).1
}

fn f_tails(f: f64, df1: f64, df2: f64) -> (f64, f64) {
    if f.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if f <= 0.0 {
        return (0.0, 1.0);
    }
    if f.is_infinite() {
        return (1.0, 0.0);
    }
    let scaled = df1 * f;
    let x = scaled / (scaled + df2);
    let y = df2 / (scaled + df2);
    inc_beta_pair(0.5 * df1, 0.5 * df2, x, y)
}

/// F distribution CDF.
pub fn f_cdf(f: f64, df1: f64, df2: f64) -> f64 {
    f_tails(f, df1, df2).0
}

/// F distribution upper tail.
pub fn f_sf(f: f64, df1: f64, df2: f64) -> f64 {
    f_tails(f, df1, df2).1
}

fn chi_square_tails(x: f64, df: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    inc_gamma_pair(0.5 * df, 0.5 * x)
}

/// Chi-square CDF, `P(df/2, x/2)`.
pub fn chi_square_cdf(x: f64, df: f64) -> f64 {
    chi_square_tails(x, df).0
}

/// Chi-square upper tail.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    chi_square_tails(x, df).1
}
