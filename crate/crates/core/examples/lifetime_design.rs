//! Exponential lifetimes: events to observe, animals to enrol, and the
//! interval for the mean lifetime and hazard.

use pilotsize::intervals::{
    hazard_rate_ci, lifetime_ci, lifetime_precision, lifetime_required_events, lifetime_sample_size,
};
use pilotsize::ConfidenceLevel;

fn main() -> pilotsize::Result<()> {
    let level = ConfidenceLevel::new(0.95)?;

    let events = lifetime_required_events(0.2, level)?;
    let animals = lifetime_sample_size(events.size, 0.10)?;
    println!("±20% with 10% censored: E = {}, N = {animals}", events.size);

    println!("E = 20 gives ±{:.1}%", lifetime_precision(20, level)? * 100.0);

    let theta = lifetime_ci(1.0, 20, level)?;
    let hazard = hazard_rate_ci(&theta)?;
    println!("theta_hat = 1, E = 20: theta in [{:.2}, {:.2}], hazard in [{:.4}, {:.4}]",
        theta.lower, theta.upper, hazard.lower, hazard.upper);
    Ok(())
}
