use crate::dist::z_inv;
use crate::error::{Error, Result};
use crate::search::smallest_satisfying;
use crate::types::{ConfidenceInterval, ConfidenceLevel, DesignResult, Flag, Method, Sidedness};

use super::{check_delta, check_p};

/// `n p > 5` and `n (1 - p) > 5`.
pub fn wald_is_valid(p: f64, n: u64) -> bool {
    let n = n as f64;
    n * p > 5.0 && n * (1.0 - p) > 5.0
}

fn clip(p: f64, half: f64) -> (f64, f64) {
    ((p - half).max(0.0), (p + half).min(1.0))
}

/// Normal-approximation interval `p̂ ± z √(p̂(1-p̂)/n)` clipped to [0, 1],
/// with whether the approximation is trustworthy at this `n`.
pub fn wald_ci(p_hat: f64, n: u64, level: ConfidenceLevel) -> Result<(ConfidenceInterval, bool)> {
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(Error::domain("p_hat", p_hat, "must lie in [0, 1]"));
    }
    if n == 0 {
        return Err(Error::domain("n", 0.0, "needs at least one trial"));
    }
    let z = z_inv(1.0 - level.alpha() / 2.0)?;
    let half = z * (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    let (lower, upper) = clip(p_hat, half);
    Ok((
        ConfidenceInterval::new(lower, upper, level, Sidedness::TwoSided),
        wald_is_valid(p_hat, n),
    ))
}

/// Half-width of the normal-approximation interval after clipping to [0, 1],
/// optionally widened by the continuity correction `1/(2n)`.
pub fn normal_precision(p: f64, n: u64, level: ConfidenceLevel, continuity_correction: bool) -> Result<f64> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::domain("n", 0.0, "needs at least one trial"));
    }
    let z = z_inv(1.0 - level.alpha() / 2.0)?;
    Ok(clipped_half_width(p, n, z, continuity_correction))
}

fn clipped_half_width(p: f64, n: u64, z: f64, continuity_correction: bool) -> f64 {
    let n = n as f64;
    let mut half = z * (p * (1.0 - p) / n).sqrt();
    if continuity_correction {
        half += 1.0 / (2.0 * n);
    }
    let (lower, upper) = clip(p, half);
    (upper - lower) / 2.0
}

/// Smallest `n` whose normal-approximation half-width is at most `delta`.
///
/// Without the correction and with `delta < min(p, 1-p)` this is
/// `⌈z² p(1-p) / δ²⌉`. The result carries
/// [`Flag::NormalApproximationInvalid`] when `n p <= 5` or `n (1-p) <= 5`.
pub fn proportion_sample_size_normal(
    p: f64,
    delta: f64,
    level: ConfidenceLevel,
    continuity_correction: bool,
) -> Result<DesignResult> {
    check_p(p)?;
    check_delta(delta)?;
    let z = z_inv(1.0 - level.alpha() / 2.0)?;
    let n = smallest_satisfying(1, |n| Ok(clipped_half_width(p, n, z, continuity_correction) <= delta))?;
    let method = if continuity_correction {
        Method::NormalContinuity
    } else {
        Method::Normal
    };
    let mut result = DesignResult::new(n, clipped_half_width(p, n, z, continuity_correction), method);
    if !wald_is_valid(p, n) {
        result = result.with_flag(Flag::NormalApproximationInvalid);
    }
    if delta >= p.min(1.0 - p) {
        result = result.with_flag(Flag::DeltaAtLeastProportion);
    }
    Ok(result)
}
