use pilotsize::proportion::{
    clopper_pearson_ci, exact_precision, proportion_sample_size_exact, proportion_sample_size_normal, wald_ci,
    BinomialObservation,
};
use pilotsize::{ConfidenceLevel, Sidedness};

fn main() -> pilotsize::Result<()> {
    let level = ConfidenceLevel::new(0.95)?;

    for (r, n) in [(3, 20), (1, 5)] {
        let exact = clopper_pearson_ci(BinomialObservation::new(r, n)?, level, Sidedness::TwoSided)?;
        let (approx, valid) = wald_ci(r as f64 / n as f64, n, level)?;
        println!(
            "{r}/{n}: exact [{:.1}%, {:.1}%], normal [{:.1}%, {:.1}%]{}",
            exact.lower * 100.0,
            exact.upper * 100.0,
            approx.lower * 100.0,
            approx.upper * 100.0,
            if valid { "" } else { " (approximation not valid)" }
        );
    }

    for p in [0.15, 0.5] {
        let exact = proportion_sample_size_exact(p, 0.05, level)?;
        let normal = proportion_sample_size_normal(p, 0.05, level, true)?;
        println!("p = {p}: ±5% needs N = {} exact, {} normal", exact.size, normal.size);
    }

    println!("N = 30, p = 0.5: ±{:.1}%", exact_precision(0.5, 30, level)? * 100.0);
    Ok(())
}
