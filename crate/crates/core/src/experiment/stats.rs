use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// CDF of N(mean, var) through `libm::erf`, whose error is far below the
/// 10⁻⁷ needed here.
pub fn normal_cdf(x: f64, mean: f64, var: f64) -> f64 {
    0.5 * (1.0 + libm::erf((x - mean) / (2.0 * var).sqrt()))
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `samples` and
/// N(mean, var).
pub fn ks_statistic(samples: &[f64], mean: f64, var: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("KS distance of an empty sample".into()));
    }
    if !(var > 0.0) || !var.is_finite() {
        return Err(Error::Domain(format!("reference variance must be positive, got {var}")));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("sample contains NaN".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = normal_cdf(x, mean, var);
        d.max((((i + 1) as f64) / n - f).abs()).max((i as f64 / n - f).abs())
    });
    Ok(d)
}

/// Moments of a sample and its KS distance to the centered Gaussian with
/// the theoretical variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (n - 1) estimator.
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Standardized fifth central moment, reported without any bound.
    pub fifth_moment: f64,
    pub ks_distance: f64,
    pub theoretical_variance: f64,
}

impl SummaryStats {
    /// All sums run sequentially in sample order so the result is bitwise
    /// reproducible.
    pub fn from_samples(xs: &[f64], theoretical_variance: f64) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::Domain("summary of an empty sample".into()));
        }
        let n = xs.len();
        let nf = n as f64;
        let mean = xs.iter().copied().collect::<CompensatedSum>().value() / nf;
        let central = |k: i32| xs.iter().map(|x| (x - mean).powi(k)).collect::<CompensatedSum>().value() / nf;
        let m2 = central(2);
        let variance = if n > 1 { m2 * nf / (nf - 1.0) } else { 0.0 };
        let (skewness, excess_kurtosis, fifth_moment) = if m2 > 0.0 {
            (central(3) / m2.powf(1.5), central(4) / (m2 * m2) - 3.0, central(5) / m2.powf(2.5))
        } else {
            (0.0, 0.0, 0.0)
        };
        Ok(Self {
            n,
            mean,
            variance,
            skewness,
            excess_kurtosis,
            fifth_moment,
            ks_distance: ks_statistic(xs, 0.0, theoretical_variance)?,
            theoretical_variance,
        })
    }
}
