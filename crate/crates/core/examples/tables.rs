//! Regenerate a design table, print it, and check all tables against the stored copies.

use pilotsize::table::{check_reproduction, generate, render, Format, TableId, TableSpec};

fn main() -> pilotsize::Result<()> {
    let t = generate(&TableSpec::default_for(TableId::StdSize))?;
    print!("{}", render(&t, Format::Text));

    // A custom grid: the mean table at two confidence levels only.
    let spec = TableSpec::default_for(TableId::MeanSize).with_confidences(vec![0.8, 0.95]);
    print!("\n{}", render(&generate(&spec)?, Format::Markdown));

    println!();
    for r in check_reproduction()? {
        println!("{:<18} {:>4} cells, {} known errata, {} unexplained", r.table_id, r.cells, r.known.len(), r.unexplained.len());
    }
    Ok(())
}
