use crate::dist::chi2_inv;
use crate::error::{Error, Result};
use crate::search::{ceil_tolerant, smallest_satisfying};
use crate::types::{
    require_at_least, require_positive, ConfidenceInterval, ConfidenceLevel, DesignResult, Method, Sidedness,
};

use super::MIN_EVENTS;

fn check_events(events: u64) -> Result<()> {
    require_at_least("events", events, MIN_EVENTS, "needs at least one observed event")
}

/// Interval for the exponential mean lifetime after `events` events
/// (Type II censoring): `[2Eθ̂/χ²_{1-α/2,2E}, 2Eθ̂/χ²_{α/2,2E}]`.
pub fn lifetime_ci(theta_hat: f64, events: u64, level: ConfidenceLevel) -> Result<ConfidenceInterval> {
    require_positive("theta_hat", theta_hat)?;
    check_events(events)?;
    let df = 2.0 * events as f64;
    let a = level.alpha();
    let lower = df * theta_hat / chi2_inv(1.0 - a / 2.0, df)?;
    let upper = df * theta_hat / chi2_inv(a / 2.0, df)?;
    Ok(ConfidenceInterval::new(lower, upper, level, Sidedness::TwoSided))
}

/// Interval width relative to `θ̂` after `events` events.
pub fn lifetime_precision(events: u64, level: ConfidenceLevel) -> Result<f64> {
    Ok(lifetime_ci(1.0, events, level)?.width())
}

/// Smallest event count whose relative width is at most `k` (non-strict).
pub fn lifetime_required_events(k: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    require_positive("k", k)?;
    let e = smallest_satisfying(MIN_EVENTS, |e| Ok(lifetime_precision(e, level)? <= k))?;
    Ok(DesignResult::new(e, lifetime_precision(e, level)?, Method::ChiSquare))
}

/// Animals to enrol so that `events` events leave a fraction
/// `censored_fraction` censored: `⌈E / (1 - C)⌉`.
pub fn lifetime_sample_size(events: u64, censored_fraction: f64) -> Result<u64> {
    check_events(events)?;
    if !(0.0..1.0).contains(&censored_fraction) {
        return Err(Error::domain(
            "censoring",
            censored_fraction,
            "must lie in [0, 1)",
        ));
    }
    Ok(ceil_tolerant(events as f64 / (1.0 - censored_fraction)))
}

/// Interval for the hazard rate `1/θ` from an interval for `θ`.
pub fn hazard_rate_ci(lifetime: &ConfidenceInterval) -> Result<ConfidenceInterval> {
    if !(lifetime.lower > 0.0) {
        return Err(Error::domain(
            "lower",
            lifetime.lower,
            "lifetime interval must have a positive lower bound",
        ));
    }
    Ok(ConfidenceInterval {
        lower: 1.0 / lifetime.upper,
        upper: 1.0 / lifetime.lower,
        ..*lifetime
    })
}
