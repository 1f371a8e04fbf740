use crate::dist::f_inv;
use crate::error::Result;
use crate::search::smallest_satisfying;
use crate::types::{ConfidenceInterval, ConfidenceLevel, DesignResult, Flag, Method, Sidedness};

use super::{check_delta, check_p, BinomialObservation};

/// Lower Clopper-Pearson bound at percentile `q` for `r` successes in `n`
/// trials; `r` may be fractional.
fn lower_bound(r: f64, n: f64, q: f64) -> Result<f64> {
    if r <= 0.0 {
        Ok(0.0)
    } else if r >= n {
        Ok((1.0 - q).powf(1.0 / n))
    } else {
        let f = f_inv(q, 2.0 * (n - r + 1.0), 2.0 * r)?;
        Ok(r / (r + (n - r + 1.0) * f))
    }
}

fn upper_bound(r: f64, n: f64, q: f64) -> Result<f64> {
    if r >= n {
        Ok(1.0)
    } else if r <= 0.0 {
        Ok(-((1.0 - q).ln() / n).exp_m1())
    } else {
        let f = f_inv(q, 2.0 * (r + 1.0), 2.0 * (n - r))?;
        Ok((r + 1.0) * f / ((n - r) + (r + 1.0) * f))
    }
}

fn bounds(r: f64, n: f64, level: ConfidenceLevel, sidedness: Sidedness) -> Result<ConfidenceInterval> {
    let a = level.alpha();
    let (lower, upper) = match sidedness {
        Sidedness::TwoSided => (lower_bound(r, n, 1.0 - a / 2.0)?, upper_bound(r, n, 1.0 - a / 2.0)?),
        Sidedness::UpperOnly => (0.0, upper_bound(r, n, 1.0 - a)?),
        Sidedness::LowerOnly => (lower_bound(r, n, 1.0 - a)?, 1.0),
    };
    Ok(ConfidenceInterval::new(lower, upper, level, sidedness))
}

/// Exact (Clopper-Pearson) interval from F percentiles.
///
/// `r = 0` gives a lower bound of 0 and `r = n` an upper bound of 1; the
/// opposite endpoints then have the closed forms `1 - (α/2)^{1/n}` and
/// `(α/2)^{1/n}` (with `α` for one-sided bounds).
pub fn clopper_pearson_ci(
    obs: BinomialObservation,
    level: ConfidenceLevel,
    sidedness: Sidedness,
) -> Result<ConfidenceInterval> {
    bounds(obs.successes() as f64, obs.trials() as f64, level, sidedness)
}

/// The same interval evaluated at the expected count `p_hat · n`, which
/// need not be an integer. Design tables are built on this form.
pub fn clopper_pearson_ci_for_rate(
    p_hat: f64,
    n: u64,
    level: ConfidenceLevel,
    sidedness: Sidedness,
) -> Result<ConfidenceInterval> {
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(crate::error::Error::domain("p_hat", p_hat, "must lie in [0, 1]"));
    }
    super::BinomialObservation::new(0, n)?;
    let n = n as f64;
    bounds(p_hat * n, n, level, sidedness)
}

/// Half-width `(upper - lower) / 2` of the two-sided exact interval at
/// `p · n` expected successes.
pub fn exact_precision(p: f64, n: u64, level: ConfidenceLevel) -> Result<f64> {
    Ok(clopper_pearson_ci_for_rate(p, n, level, Sidedness::TwoSided)?.width() / 2.0)
}

/// Smallest `n` whose exact interval has half-width at most `delta`.
///
/// The half-width must also hold at `n + 1`, so a size that only satisfies
/// the target through round-off in the percentiles is not returned.
pub fn proportion_sample_size_exact(p: f64, delta: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    check_p(p)?;
    check_delta(delta)?;
    exact_design(p, delta, level)
}

pub(super) fn exact_design(p: f64, delta: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    let fits = |n: u64| -> Result<bool> { Ok(exact_precision(p, n, level)? <= delta) };
    let n = smallest_satisfying(1, |n| Ok(fits(n)? && fits(n + 1)?))?;
    let mut result = DesignResult::new(n, exact_precision(p, n, level)?, Method::Exact);
    if delta >= p.min(1.0 - p) {
        result = result.with_flag(Flag::DeltaAtLeastProportion);
    }
    Ok(result)
}
