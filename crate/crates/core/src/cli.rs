//! Command-line front end. Every subcommand builds a [`DesignRequest`] and
//! goes through the same [`api::handle`] path as the HTTP service.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};

use crate::api::{self, ApiError, DesignRequest, DesignResponse, Estimand, Operation, RequestMethod, ResultKind};
use crate::table::{self, Format, TableId, TableSpec};

#[derive(Debug, Parser)]
#[command(name = "pilotsize", version, about = "Sample sizes, precisions and confidence intervals for pilot studies")]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smallest sample size (or event count) reaching a target precision.
    Design(QueryArgs),
    /// Precision delivered by a given sample size.
    Precision(QueryArgs),
    /// Confidence interval from observed data.
    Ci(QueryArgs),
    /// Regenerate a design table, or check all of them against the stored copies.
    Table(TableArgs),
    /// Run the HTTP JSON service.
    Serve(ServeArgs),
}

fn estimand_names() -> PossibleValuesParser {
    PossibleValuesParser::new(Estimand::ALL.map(Estimand::as_str))
}

fn method_names() -> PossibleValuesParser {
    PossibleValuesParser::new(RequestMethod::ALL.map(RequestMethod::as_str))
}

fn output_formats() -> PossibleValuesParser {
    PossibleValuesParser::new(["table", "text", "csv", "tsv", "markdown", "md", "json"])
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct QueryArgs {
    #[arg(value_parser = estimand_names())]
    estimand: String,
    /// Confidence level 1 - alpha [default: 0.95].
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long, value_parser = method_names())]
    method: Option<String>,
    /// Target precision (relative for stddev, mean and proportion-rare, absolute otherwise).
    #[arg(long)]
    delta: Option<f64>,
    /// Relative precision for rare proportions and lifetimes.
    #[arg(long)]
    k: Option<f64>,
    /// Sample size.
    #[arg(long)]
    n: Option<f64>,
    /// Number of events.
    #[arg(long)]
    e: Option<f64>,
    /// Expected or observed proportion.
    #[arg(long)]
    p: Option<f64>,
    /// Upper limit for a one-sided proportion design.
    #[arg(long)]
    p_upper: Option<f64>,
    /// Lower limit for a one-sided proportion design.
    #[arg(long)]
    p_lower: Option<f64>,
    /// Successes (proportions) or observed correlation.
    #[arg(long)]
    r: Option<f64>,
    /// Expected correlation.
    #[arg(long)]
    rho: Option<f64>,
    /// Observed standard deviation.
    #[arg(long)]
    s: Option<f64>,
    /// Observed mean.
    #[arg(long)]
    mean: Option<f64>,
    /// Observed mean lifetime.
    #[arg(long)]
    theta: Option<f64>,
    /// Expected censored fraction [default: 0].
    #[arg(long)]
    censoring: Option<f64>,
    /// Continuity correction for normal-approximation proportions [default: true].
    #[arg(long)]
    continuity: Option<bool>,
    #[arg(long, short, default_value = "table", value_parser = output_formats())]
    format: String,
}

impl QueryArgs {
    fn request(&self) -> DesignRequest {
        DesignRequest {
            estimand: Some(self.estimand.clone()),
            method: self.method.clone(),
            confidence: self.confidence,
            delta: self.delta,
            k: self.k,
            n: self.n,
            e: self.e,
            p: self.p,
            p_upper: self.p_upper,
            p_lower: self.p_lower,
            r: self.r,
            rho: self.rho,
            s: self.s,
            mean: self.mean,
            theta: self.theta,
            censoring: self.censoring,
            continuity: self.continuity,
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct TableArgs {
    /// Table id, e.g. `T1` or `T1_std_size`. Without it every table is
    /// regenerated and compared with the stored copies.
    id: Option<String>,
    /// Confidence levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    confidences: Option<Vec<f64>>,
    /// Row-group values (p, p̂, p_U, rho or r), comma separated.
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<f64>>,
    /// Column values (delta, k, N or E), comma separated.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<f64>>,
    /// Continuity correction for the central proportion size table.
    #[arg(long)]
    continuity: Option<bool>,
    /// Also write every regenerated table to this directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, short, default_value = "table", value_parser = output_formats())]
    format: String,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "PILOTSIZE_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: String,
    /// Allowed CORS origins, comma separated; `*` allows any.
    #[arg(long, env = "PILOTSIZE_ORIGINS", value_delimiter = ',')]
    origins: Vec<String>,
}

/// Process exit status.
pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `argv` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Design(q) => query(Operation::Design, &q, out),
        Command::Precision(q) => query(Operation::Precision, &q, out),
        Command::Ci(q) => query(Operation::Ci, &q, out),
        Command::Table(t) => table_command(&t, out),
        Command::Serve(s) => serve(&s),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure { code, lines }) => {
            for line in lines {
                let _ = writeln!(err, "error: {line}");
            }
            code
        }
    }
}

struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            lines: vec![message.into()],
        }
    }

    fn domain(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_DOMAIN,
            lines: vec![message.into()],
        }
    }
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Failure {
        Failure {
            code: if e.is_usage() { EXIT_USAGE } else { EXIT_DOMAIN },
            lines: e.errors.iter().map(|f| format!("--{}: {}", f.field.replace('_', "-"), f.message)).collect(),
        }
    }
}

impl From<crate::error::Error> for Failure {
    fn from(e: crate::error::Error) -> Failure {
        Failure::domain(e.to_string())
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::domain(format!("write failed: {e}"))
}

fn query(op: Operation, args: &QueryArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let format: Format = args.format.parse()?;
    let response = api::handle(op, &args.request())?;
    out.write_all(format_response(&response, format).as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

/// Renders a service response for the terminal. JSON output is the service
/// body itself.
pub fn format_response(r: &DesignResponse, format: Format) -> String {
    if format == Format::Json {
        let mut s = serde_json::to_string_pretty(r).expect("responses serialize");
        s.push('\n');
        return s;
    }
    let rows = response_rows(r);
    match format {
        Format::Csv | Format::Tsv => {
            let delimiter = if format == Format::Csv { b',' } else { b'\t' };
            let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(Vec::new());
            w.write_record(["field", "value"]).expect("in-memory write");
            for (k, v) in &rows {
                w.write_record([k, v]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
        Format::Markdown => {
            let mut s = String::from("| field | value |\n|---|---|\n");
            for (k, v) in &rows {
                s.push_str(&format!("| {k} | {v} |\n"));
            }
            s
        }
        _ => {
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in &rows {
                if k == "warning" {
                    s.push_str(&format!("warning: {v}\n"));
                } else {
                    s.push_str(&format!("{k:<width$} = {v}\n"));
                }
            }
            s
        }
    }
}

fn percent(x: f64, decimals: usize) -> String {
    format!("{:.*}%", decimals, 100.0 * x)
}

fn is_proportion(e: Estimand) -> bool {
    matches!(
        e,
        Estimand::Proportion | Estimand::ProportionRare | Estimand::ProportionOneSided
    )
}

fn interval_text(e: Estimand, [lo, hi]: [f64; 2]) -> String {
    let tidy = |x: f64, d: usize| {
        let s = format!("{x:.d$}");
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    };
    match e {
        _ if is_proportion(e) => format!("[{}, {}]", percent(lo, 1), percent(hi, 1)),
        Estimand::Correlation | Estimand::Lifetime => format!("[{}, {}]", tidy(lo, 2), tidy(hi, 2)),
        _ => format!("[{}, {}]", tidy(lo, 4), tidy(hi, 4)),
    }
}

/// Precision as a percentage, except for correlation widths.
fn precision_text(e: Estimand, x: f64) -> String {
    match e {
        Estimand::Correlation => format!("{x:.4}"),
        _ => percent(x, 2),
    }
}

fn response_rows(r: &DesignResponse) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    let mut push = |k: &str, v: String| rows.push((k.to_string(), v));
    match r.kind {
        ResultKind::SampleSize => {
            if let Some(e) = r.events {
                push("E", e.to_string());
            }
            if let Some(n) = r.sample_size {
                push("N", n.to_string());
            }
            if let Some(x) = r.precision {
                push("achieved", precision_text(r.estimand, x));
            }
        }
        ResultKind::Precision => {
            if let Some(x) = r.precision {
                let key = if r.estimand == Estimand::ProportionOneSided {
                    "bound"
                } else if r.estimand == Estimand::Correlation {
                    "width"
                } else {
                    "delta"
                };
                push(key, precision_text(r.estimand, x));
            }
        }
        ResultKind::Interval => {
            if let Some(ci) = r.interval {
                push("interval", interval_text(r.estimand, ci));
            }
            if let Some([lo, hi]) = r.hazard_interval {
                push("hazard", format!("[{lo:.4}, {hi:.4}]"));
            }
        }
    }
    push("method", method_name(r));
    push("valid", r.valid.to_string());
    for w in &r.warnings {
        push("warning", w.clone());
    }
    rows
}

fn method_name(r: &DesignResponse) -> String {
    serde_json::to_value(r.method)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn table_spec(id: TableId, args: &TableArgs) -> TableSpec {
    let mut spec = TableSpec::default_for(id);
    if let Some(c) = &args.confidences {
        spec = spec.with_confidences(c.clone());
    }
    if let Some(g) = &args.groups {
        spec = spec.with_groups(g.clone());
    }
    if let Some(c) = &args.columns {
        spec = spec.with_columns(c.clone());
    }
    if let Some(cc) = args.continuity {
        spec = spec.with_continuity_correction(cc);
    }
    spec
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Text => "txt",
        Format::Csv => "csv",
        Format::Tsv => "tsv",
        Format::Markdown => "md",
        Format::Json => "json",
    }
}

fn table_command(args: &TableArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let format: Format = args.format.parse()?;
    let Some(id) = &args.id else {
        if args.confidences.is_some() || args.groups.is_some() || args.columns.is_some() || args.continuity.is_some() {
            return Err(Failure::usage("grid overrides need a table id"));
        }
        return check_all(args, format, out);
    };
    let id: TableId = id.parse().map_err(|e: crate::error::Error| Failure::usage(e.to_string()))?;
    let spec = table_spec(id, args);
    let t = table::generate(&spec)?;
    let text = table::render(&t, format);
    if let Some(dir) = &args.out_dir {
        write_table(dir, id, format, &text)?;
    }
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

fn write_table(dir: &std::path::Path, id: TableId, format: Format, text: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(io)?;
    let path = dir.join(format!("{}.{}", id.as_str(), extension(format)));
    std::fs::write(&path, text).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

/// Regenerates every table and reports differences from the stored copies.
/// Differences recorded as errata are reported but do not fail the check.
fn check_all(args: &TableArgs, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(dir) = &args.out_dir {
        for (id, t) in TableId::ALL.iter().zip(table::generate_all()?) {
            write_table(dir, *id, format, &table::render(&t, format))?;
        }
    }
    let report = table::check_reproduction()?;
    let unexplained: usize = report.iter().map(|r| r.unexplained.len()).sum();
    if format == Format::Json {
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        out.write_all(s.as_bytes()).map_err(io)?;
    } else {
        let mut s = String::new();
        for r in &report {
            let status = match (r.unexplained.len(), r.known.len()) {
                (0, 0) => "ok".to_string(),
                (0, k) => format!("ok, {k} known erratum{}", if k == 1 { "" } else { "s" }),
                (u, _) => format!("FAILED, {u} unexplained difference{}", if u == 1 { "" } else { "s" }),
            };
            s.push_str(&format!("{:<26} {:>4} cells  {status}\n", r.table_id, r.cells));
            for m in &r.known {
                s.push_str(&format!("    erratum: {m}\n"));
            }
            for m in &r.unexplained {
                s.push_str(&format!("    differs: {m}\n"));
            }
        }
        out.write_all(s.as_bytes()).map_err(io)?;
    }
    Ok(if unexplained == 0 { EXIT_OK } else { EXIT_DOMAIN })
}

fn serve(args: &ServeArgs) -> Result<i32, Failure> {
    let config = crate::service::ServiceConfig {
        bind: args.bind.clone(),
        port: args.port,
        origins: args.origins.clone(),
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::domain(format!("runtime: {e}")))?;
    runtime
        .block_on(crate::service::serve(config))
        .map_err(|e| Failure::domain(format!("cannot serve on {}:{}: {e}", args.bind, args.port)))?;
    Ok(EXIT_OK)
}
