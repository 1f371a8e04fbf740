use pilotsize::intervals::{correlation_ci, correlation_sample_size, correlation_width};
use pilotsize::ConfidenceLevel;

fn main() -> pilotsize::Result<()> {
    let level = ConfidenceLevel::new(0.95)?;

    let ci = correlation_ci(0.3, 20, level)?;
    println!("r = 0.3, N = 20: [{:.2}, {:.2}]", ci.lower, ci.upper);

    for rho in [0.1, 0.3, 0.8] {
        let d = correlation_sample_size(rho, 0.2, level)?;
        println!("rho = {rho}: width 0.2 needs N = {}", d.size);
    }
    println!("rho = 0.5, N = 50: width {:.3}", correlation_width(0.5, 50, level)?);
    Ok(())
}
