use serde::{Deserialize, Serialize};

use crate::dist::chi2_inv;
use crate::error::{Error, Result};
use crate::search::{ceil_tolerant, smallest_satisfying};
use crate::types::{ConfidenceInterval, ConfidenceLevel, DesignResult, Method, Probability, Sidedness};

use super::{clopper_pearson_ci, BinomialObservation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    /// Certify `p <= p_U` after observing no events.
    Upper,
    /// Certify `p >= p_L` after observing only events.
    Lower,
}

/// A one-sided claim about a proportion at a given confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedBound {
    pub direction: BoundDirection,
    pub bound: Probability,
    pub level: ConfidenceLevel,
}

impl OneSidedBound {
    pub fn upper(p_upper: f64, level: ConfidenceLevel) -> Result<Self> {
        Ok(OneSidedBound {
            direction: BoundDirection::Upper,
            bound: Probability::new(p_upper)?,
            level,
        })
    }

    pub fn lower(p_lower: f64, level: ConfidenceLevel) -> Result<Self> {
        Ok(OneSidedBound {
            direction: BoundDirection::Lower,
            bound: Probability::new(p_lower)?,
            level,
        })
    }

    /// Distance from the bound to the boundary it is measured from:
    /// `p_U` for upper bounds, `1 - p_L` for lower bounds.
    fn margin(self) -> f64 {
        match self.direction {
            BoundDirection::Upper => self.bound.value(),
            BoundDirection::Lower => 1.0 - self.bound.value(),
        }
    }
}

/// `[0, 1 - α^{1/n}]`: the exact one-sided upper bound after zero events in `n` trials.
pub fn zero_event_ci(n: u64, level: ConfidenceLevel) -> Result<ConfidenceInterval> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "needs at least one trial"));
    }
    let upper = -(level.alpha().ln() / n as f64).exp_m1();
    Ok(ConfidenceInterval::new(0.0, upper, level, Sidedness::UpperOnly))
}

/// `χ²_{1-α;2} / (2n)`, the approximate upper bound after zero events.
/// At 95% this is the rule of three, `2.9957 / n`.
pub fn rule_of_three_upper_bound(n: u64, level: ConfidenceLevel) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "needs at least one trial"));
    }
    Ok(chi2_inv(1.0 - level.alpha(), 2.0)? / (2.0 * n as f64))
}

/// `⌈ln α / ln(1 - p_U)⌉`, or `⌈ln α / ln p_L⌉` for a lower bound.
pub fn zero_acceptance_sample_size(bound: OneSidedBound) -> Result<DesignResult> {
    let m = bound.margin();
    let n = ceil_tolerant(bound.level.alpha().ln() / (-m).ln_1p());
    let achieved = zero_event_ci(n, bound.level)?.upper;
    Ok(DesignResult::new(n, achieved, Method::ZeroAcceptance))
}

/// `⌈χ²_{1-α;2} / (2 p_U)⌉`, or with `1 - p_L` for a lower bound.
pub fn rule_of_three_sample_size(bound: OneSidedBound) -> Result<DesignResult> {
    let chi = chi2_inv(1.0 - bound.level.alpha(), 2.0)?;
    let n = ceil_tolerant(chi / (2.0 * bound.margin()));
    Ok(DesignResult::new(n, rule_of_three_upper_bound(n, bound.level)?, Method::RuleOfThree))
}

/// Smallest `n` whose one-sided exact bound after zero events (or after
/// `n` events, for a lower bound) reaches the requested bound.
pub fn one_sided_exact_sample_size(bound: OneSidedBound) -> Result<DesignResult> {
    let m = bound.margin();
    let reach = |n: u64| -> Result<f64> {
        Ok(match bound.direction {
            BoundDirection::Upper => {
                clopper_pearson_ci(BinomialObservation::new(0, n)?, bound.level, Sidedness::UpperOnly)?.upper
            }
            BoundDirection::Lower => {
                1.0 - clopper_pearson_ci(BinomialObservation::new(n, n)?, bound.level, Sidedness::LowerOnly)?.lower
            }
        })
    };
    let n = smallest_satisfying(1, |n| Ok(reach(n)? <= m))?;
    Ok(DesignResult::new(n, reach(n)?, Method::Exact))
}
