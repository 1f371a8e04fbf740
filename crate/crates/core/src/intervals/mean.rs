use crate::dist::t_inv;
use crate::error::{Error, Result};
use crate::search::smallest_satisfying;
use crate::types::{require_at_least, require_positive, ConfidenceInterval, ConfidenceLevel, DesignResult, Method, Sidedness};

use super::MIN_N_LOCATION;

/// Half-width of the interval for μ in units of the sample standard deviation:
/// `t_{1-α/2, n-1} / √n`.
pub fn mean_precision(n: u64, level: ConfidenceLevel) -> Result<f64> {
    require_at_least("n", n, MIN_N_LOCATION, "must be at least 2 for a mean")?;
    let t = t_inv(1.0 - level.alpha() / 2.0, (n - 1) as f64)?;
    Ok(t / (n as f64).sqrt())
}

/// Smallest `n >= 2` with `mean_precision(n) <= delta`.
pub fn mean_sample_size(delta: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    require_positive("delta", delta)?;
    let n = smallest_satisfying(MIN_N_LOCATION, |n| Ok(mean_precision(n, level)? <= delta))?;
    Ok(DesignResult::new(n, mean_precision(n, level)?, Method::StudentT))
}

/// `mu_hat ± s · mean_precision(n)`. For paired data pass the mean and
/// standard deviation of the differences.
pub fn mean_ci(mu_hat: f64, s: f64, n: u64, level: ConfidenceLevel) -> Result<ConfidenceInterval> {
    if !mu_hat.is_finite() {
        return Err(Error::domain("mu_hat", mu_hat, "must be finite"));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::domain("s", s, "must be non-negative and finite"));
    }
    let half = s * mean_precision(n, level)?;
    Ok(ConfidenceInterval::new(mu_hat - half, mu_hat + half, level, Sidedness::TwoSided))
}
