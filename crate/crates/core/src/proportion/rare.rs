use crate::dist::z_inv;
use crate::error::{Error, Result};
use crate::search::ceil_tolerant;
use crate::types::{ConfidenceLevel, DesignResult, Flag, Method};

use super::{check_p, exact::exact_design, exact_precision};

/// Rare-event designs apply when `min(p, 1-p)` is at most this.
pub const RARE_LIMIT: f64 = 0.1;

/// Distance to the nearer boundary, checked against [`RARE_LIMIT`].
fn rare_side(p: f64) -> Result<f64> {
    check_p(p)?;
    let near = p.min(1.0 - p);
    if near > RARE_LIMIT {
        return Err(Error::domain("p", p, "rare-event designs need p <= 0.1 or p >= 0.9"));
    }
    Ok(near)
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("k", k, "relative precision must lie in (0, 1]"))
    }
}

/// `⌈(z / (k √p))²⌉` from the Poisson-to-normal chain, with `p` replaced by
/// `1 - p` for proportions near one. Flagged unless `n >= 20`, `p <= 5%` and
/// `n p >= 30`.
pub fn rare_proportion_sample_size_poisson(p: f64, k: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    let near = rare_side(p)?;
    check_k(k)?;
    let z = z_inv(1.0 - level.alpha() / 2.0)?;
    let n = ceil_tolerant((z / (k * near.sqrt())).powi(2));
    let mut result = DesignResult::new(n, rare_precision_poisson(p, n, level)?, Method::Poisson);
    let valid = n >= 20 && near <= 0.05 && n as f64 * near >= 30.0;
    if !valid {
        result = result.with_flag(Flag::PoissonApproximationInvalid);
    }
    Ok(result)
}

/// Exact design with absolute precision `k · min(p, 1-p)`.
pub fn rare_proportion_sample_size_exact(p: f64, k: f64, level: ConfidenceLevel) -> Result<DesignResult> {
    let near = rare_side(p)?;
    check_k(k)?;
    exact_design(p, k * near, level)
}

/// Achieved relative precision `z / √(n p)` of the Poisson design at `n`.
pub fn rare_precision_poisson(p: f64, n: u64, level: ConfidenceLevel) -> Result<f64> {
    let near = rare_side(p)?;
    if n == 0 {
        return Err(Error::domain("n", 0.0, "needs at least one trial"));
    }
    Ok(z_inv(1.0 - level.alpha() / 2.0)? / (n as f64 * near).sqrt())
}

/// Exact half-width at `n` as a fraction of `min(p, 1-p)`.
pub fn rare_precision_exact(p: f64, n: u64, level: ConfidenceLevel) -> Result<f64> {
    let near = rare_side(p)?;
    Ok(exact_precision(p, n, level)? / near)
}
