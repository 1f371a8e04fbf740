//! Binomial proportions: exact (Clopper-Pearson) and normal-approximation
//! intervals and sample sizes, rare-event designs with relative precision,
//! and one-sided designs for certifying that a rate is below a bound.

mod exact;
mod normal;
mod one_sided;
mod rare;

pub use exact::{
    clopper_pearson_ci, clopper_pearson_ci_for_rate, exact_precision, proportion_sample_size_exact,
};
pub use normal::{normal_precision, proportion_sample_size_normal, wald_ci, wald_is_valid};
pub use one_sided::{
    one_sided_exact_sample_size, rule_of_three_sample_size, rule_of_three_upper_bound,
    zero_acceptance_sample_size, zero_event_ci, BoundDirection, OneSidedBound,
};
pub use rare::{
    rare_precision_exact, rare_precision_poisson, rare_proportion_sample_size_exact,
    rare_proportion_sample_size_poisson, RARE_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `r` successes out of `n` trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialObservation {
    successes: u64,
    trials: u64,
}

impl BinomialObservation {
    pub fn new(successes: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("n", 0.0, "needs at least one trial"));
        }
        if successes > trials {
            return Err(Error::domain("r", successes as f64, "cannot exceed the number of trials"));
        }
        Ok(BinomialObservation { successes, trials })
    }

    pub fn successes(self) -> u64 {
        self.successes
    }

    pub fn trials(self) -> u64 {
        self.trials
    }

    pub fn p_hat(self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// An expected proportion strictly inside (0, 1).
fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("p", p, "must lie strictly between 0 and 1"))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("delta", delta, "must lie strictly between 0 and 1"))
    }
}
