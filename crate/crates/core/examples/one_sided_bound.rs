//! How many subjects must show no events before a rate can be bounded.

use pilotsize::proportion::{
    one_sided_exact_sample_size, rule_of_three_sample_size, rule_of_three_upper_bound, zero_acceptance_sample_size,
    zero_event_ci, OneSidedBound,
};
use pilotsize::ConfidenceLevel;

fn main() -> pilotsize::Result<()> {
    let level = ConfidenceLevel::new(0.95)?;
    for p_upper in [0.05, 0.01] {
        let bound = OneSidedBound::upper(p_upper, level)?;
        println!(
            "rate <= {p_upper}: {} zero-acceptance, {} rule of three, {} exact",
            zero_acceptance_sample_size(bound)?.size,
            rule_of_three_sample_size(bound)?.size,
            one_sided_exact_sample_size(bound)?.size,
        );
    }

    // The dual: a proportion known to be high.
    let bound = OneSidedBound::lower(0.99, level)?;
    println!("rate >= 0.99: {}", zero_acceptance_sample_size(bound)?.size);

    let ci = zero_event_ci(10, level)?;
    println!(
        "0 events in 10: upper bound {:.2}% exact, {:.2}% rule of three",
        ci.upper * 100.0,
        rule_of_three_upper_bound(10, level)? * 100.0
    );
    Ok(())
}
