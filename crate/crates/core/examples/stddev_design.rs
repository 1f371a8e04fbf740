//! Sizing a pilot study whose goal is the standard deviation.

use pilotsize::intervals::{stddev_ci, stddev_precision, stddev_sample_size};
use pilotsize::ConfidenceLevel;

fn main() -> pilotsize::Result<()> {
    let level = ConfidenceLevel::new(0.95)?;

    for delta in [0.5, 0.25, 0.10] {
        let d = stddev_sample_size(delta, level)?;
        println!("delta {:>4.0}%: N = {:>5} (achieves {:.2}%)", delta * 100.0, d.size, d.achieved * 100.0);
    }

    // What a very small pilot buys.
    for n in [5, 10, 30] {
        println!("N = {n:>2}: precision {:.2}%", stddev_precision(n, level)? * 100.0);
    }

    let ci = stddev_ci(1.0, 5, level)?;
    println!("s = 1 at N = 5: sigma in [{:.4}, {:.4}]", ci.lower, ci.upper);
    Ok(())
}
