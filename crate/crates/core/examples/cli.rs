//! Drives the command-line interface in-process, as the `pilotsize` binary does.

use pilotsize::cli::run;

fn main() {
    let commands: [&[&str]; 4] = [
        &["design", "stddev", "--confidence", "0.95", "--delta", "0.10"],
        &["ci", "proportion", "--r", "3", "--n", "20"],
        &["design", "lifetime", "--k", "0.2", "--censoring", "0.10", "--format", "csv"],
        &["table", "T9", "--format", "markdown"],
    ];
    for args in commands {
        println!("$ pilotsize {}", args.join(" "));
        let argv = std::iter::once("pilotsize").chain(args.iter().copied());
        let code = run(argv, &mut std::io::stdout(), &mut std::io::stderr());
        println!("(exit {code})\n");
    }
}
