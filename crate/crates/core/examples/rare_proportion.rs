//! Proportions below 10% (or above 90%), with precision relative to `p`.

use pilotsize::proportion::{
    rare_precision_exact, rare_proportion_sample_size_exact, rare_proportion_sample_size_poisson,
};
use pilotsize::ConfidenceLevel;

fn main() -> pilotsize::Result<()> {
    let level = ConfidenceLevel::new(0.95)?;
    for p in [0.05, 0.01] {
        for k in [0.5, 0.25] {
            let exact = rare_proportion_sample_size_exact(p, k, level)?;
            let poisson = rare_proportion_sample_size_poisson(p, k, level)?;
            let mark = if poisson.is_valid() { "" } else { "*" };
            println!("p = {p:<5} k = {k:<5} N = {:>6} exact, {:>6}{mark} Poisson", exact.size, poisson.size);
        }
    }
    println!("* approximation not valid at that size");

    let k = rare_precision_exact(0.99, 100, level)?;
    println!("p = 99%, N = 100: the rarer outcome is known to ±{:.0}%", k * 100.0);
    Ok(())
}
