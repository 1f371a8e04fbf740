//! Means and paired differences share one design.

use pilotsize::intervals::{mean_ci, mean_precision, mean_sample_size};
use pilotsize::ConfidenceLevel;

fn main() -> pilotsize::Result<()> {
    let level = ConfidenceLevel::new(0.95)?;

    let d = mean_sample_size(0.2, level)?;
    println!("mean within ±20% of sigma: N = {}", d.size);

    println!("N = 10 gives ±{:.2}% of sigma", mean_precision(10, level)? * 100.0);

    // Paired design: differences before/after on the same subjects.
    let diffs = [1.8, 2.6, 0.9, 3.1, 2.2, 1.4, 2.9, 1.7, 2.5, 2.0];
    let n = diffs.len() as f64;
    let m = diffs.iter().sum::<f64>() / n;
    let s = (diffs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let ci = mean_ci(m, s, diffs.len() as u64, level)?;
    println!("mean difference {m:.3}, 95% CI [{:.3}, {:.3}]", ci.lower, ci.upper);
    Ok(())
}
