//! Smallest integer satisfying a constraint that is monotone in the integer.

use crate::error::{Error, Result};

/// Sizes beyond this are reported as [`Error::NoSolution`].
pub const SEARCH_LIMIT: u64 = 1 << 40;

/// Smallest `n >= min` with `holds(n)`.
///
/// Doubles until the constraint holds, bisects the last doubling step, then
/// walks down while `n - 1` still holds, which absorbs small non-monotone
/// wobbles in the constraint.
pub fn smallest_satisfying<F>(min: u64, mut holds: F) -> Result<u64>
where
    F: FnMut(u64) -> Result<bool>,
{
    if holds(min)? {
        return Ok(min);
    }
    let mut lo = min;
    let mut hi = min.max(1) * 2;
    while !holds(hi)? {
        lo = hi;
        hi *= 2;
        if hi > SEARCH_LIMIT {
            return Err(Error::NoSolution { limit: SEARCH_LIMIT });
        }
    }
    // Invariant: holds(hi) and !holds(lo).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    while hi > min && holds(hi - 1)? {
        hi -= 1;
    }
    Ok(hi)
}

/// Ceiling that ignores round-off just above an integer.
pub(crate) fn ceil_tolerant(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.abs().max(1.0) {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}
