use crate::dist::chi2_inv;
use crate::error::Result;
use crate::search::smallest_satisfying;
use crate::types::{
    require_at_least, require_positive, ConfidenceInterval, ConfidenceLevel, DesignResult, Method, Sidedness,
};

use super::MIN_N_LOCATION;

fn check_n(n: u64) -> Result<()> {
    require_at_least("n", n, MIN_N_LOCATION, "must be at least 2 for a standard deviation")
}

/// Relative precision `δ = √((n-1)/χ²_{α/2, n-1}) - 1` of the sample standard deviation.
///
/// This is the relative distance from `s` to the upper confidence bound, the
/// longer side of the interval. Values above one are normal for tiny `n`.
pub fn stddev_precision(n: u64, level: ConfidenceLevel) -> Result<f64> {
    check_n(n)?;
    let df = (n - 1) as f64;
    Ok((df / chi2_inv(level.alpha() / 2.0, df)?).sqrt() - 1.0)
}

/// Smallest `n >= 2` with `stddev_precision(n) <= delta`.
pub fn stddev_sample_size(delta: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    require_positive("delta", delta)?;
    let n = smallest_satisfying(MIN_N_LOCATION, |n| Ok(stddev_precision(n, level)? <= delta))?;
    Ok(DesignResult::new(n, stddev_precision(n, level)?, Method::ChiSquare))
}

/// Two-sided interval for σ from the sample standard deviation `s` of `n` observations.
pub fn stddev_ci(s: f64, n: u64, level: ConfidenceLevel) -> Result<ConfidenceInterval> {
    require_positive("s", s)?;
    check_n(n)?;
    let df = (n - 1) as f64;
    let a = level.alpha();
    let lower = s * (df / chi2_inv(1.0 - a / 2.0, df)?).sqrt();
    let upper = s * (df / chi2_inv(a / 2.0, df)?).sqrt();
    Ok(ConfidenceInterval::new(lower, upper, level, Sidedness::TwoSided))
}
