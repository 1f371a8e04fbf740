use crate::dist::z_inv;
use crate::error::{Error, Result};
use crate::search::smallest_satisfying;
use crate::types::{require_at_least, ConfidenceInterval, ConfidenceLevel, DesignResult, Method, Sidedness};

use super::MIN_N_CORRELATION;

fn check_rho(param: &'static str, rho: f64) -> Result<()> {
    if rho.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(param, rho, "must lie strictly between -1 and 1"))
    }
}

/// Fisher-z half-width `z_{1-α/2} / √(n-3)`.
fn z_half_width(n: u64, level: ConfidenceLevel) -> Result<f64> {
    require_at_least("n", n, MIN_N_CORRELATION, "must be at least 4 for a correlation")?;
    Ok(z_inv(1.0 - level.alpha() / 2.0)? / ((n - 3) as f64).sqrt())
}

/// Interval for ρ from an observed Pearson correlation `r`, symmetric in
/// Fisher-z space and therefore asymmetric around `r`.
pub fn correlation_ci(r: f64, n: u64, level: ConfidenceLevel) -> Result<ConfidenceInterval> {
    check_rho("r", r)?;
    let h = z_half_width(n, level)?;
    let z = r.atanh();
    Ok(ConfidenceInterval::new((z - h).tanh(), (z + h).tanh(), level, Sidedness::TwoSided))
}

/// Full width of the interval when the correlation is `rho`.
pub fn correlation_width(rho: f64, n: u64, level: ConfidenceLevel) -> Result<f64> {
    Ok(correlation_ci(rho, n, level)?.width())
}

/// Smallest `n >= 4` whose interval is at most `delta` wide.
pub fn correlation_sample_size(rho: f64, delta: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    check_rho("rho", rho)?;
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::domain("delta", delta, "must lie strictly between 0 and 2"));
    }
    let n = smallest_satisfying(MIN_N_CORRELATION, |n| Ok(correlation_width(rho, n, level)? <= delta))?;
    Ok(DesignResult::new(n, correlation_width(rho, n, level)?, Method::FisherZ))
}
