//! Intervals, achieved precisions and minimal sizes for the standard
//! deviation, mean (and paired difference), correlation and exponential
//! mean lifetime.
//!
//! A paired design is a mean design on the within-pair differences, so
//! [`mean_precision`], [`mean_sample_size`] and [`mean_ci`] serve both.

mod correlation;
mod lifetime;
mod mean;
mod stddev;

pub use correlation::{correlation_ci, correlation_sample_size, correlation_width};
pub use lifetime::{
    hazard_rate_ci, lifetime_ci, lifetime_precision, lifetime_required_events, lifetime_sample_size,
};
pub use mean::{mean_ci, mean_precision, mean_sample_size};
pub use stddev::{stddev_ci, stddev_precision, stddev_sample_size};

/// Smallest `n` for σ and μ designs: one degree of freedom.
pub const MIN_N_LOCATION: u64 = 2;
/// Smallest `n` for correlation designs: `n - 3 >= 1`.
pub const MIN_N_CORRELATION: u64 = 4;
/// Smallest event count for lifetime designs.
pub const MIN_EVENTS: u64 = 1;
