//! Regenerates the design tables cell by cell from the design functions,
//! renders them, and compares them with the stored golden copies.

mod golden;
mod render;
mod spec;

pub use golden::{
    check_reproduction, diff_against_golden, diff_tables, errata, golden_checksum, golden_dir_override, load_golden, Erratum,
    Mismatch, Reproduction, Tolerance, GOLDEN_DIR_ENV,
};
pub use render::{render, Format};
pub use spec::{TableId, TableSpec};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{
    correlation_ci, correlation_sample_size, lifetime_ci, lifetime_required_events, mean_precision,
    mean_sample_size, stddev_precision, stddev_sample_size,
};
use crate::proportion::{
    clopper_pearson_ci_for_rate, one_sided_exact_sample_size, proportion_sample_size_exact,
    proportion_sample_size_normal, rare_proportion_sample_size_exact, rare_proportion_sample_size_poisson,
    rule_of_three_sample_size, zero_acceptance_sample_size, OneSidedBound,
};
use crate::types::{format_percent_trimmed, ConfidenceInterval, ConfidenceLevel, DesignResult, Sidedness};

/// Numeric content of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellValue {
    Int(u64),
    Real(f64),
    Pair([f64; 2]),
}

/// One table cell. `alt` holds the parenthesised approximate size shown
/// next to an exact one; `valid` is false when that approximation does not
/// hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub value: CellValue,
    pub display: String,
    pub valid: bool,
    pub alt: Option<u64>,
}

impl Cell {
    fn plain(value: CellValue, display: String) -> Cell {
        Cell {
            value,
            display,
            valid: true,
            alt: None,
        }
    }

    fn size(n: u64) -> Cell {
        Cell::plain(CellValue::Int(n), n.to_string())
    }

    fn percent(x: f64) -> Cell {
        Cell::plain(CellValue::Real(x), format!("{}%", fixed(x * 100.0, 2)))
    }

    fn label_percent(x: f64) -> Cell {
        Cell::plain(CellValue::Real(x), format!("{}%", format_percent_trimmed(x)))
    }

    fn label_plain(x: f64) -> Cell {
        Cell::plain(CellValue::Real(x), x.to_string())
    }

    fn interval_percent(ci: &ConfidenceInterval) -> Cell {
        Cell::plain(
            CellValue::Pair([ci.lower, ci.upper]),
            format!("[{}%, {}%]", fixed(ci.lower * 100.0, 1), fixed(ci.upper * 100.0, 1)),
        )
    }

    fn interval(ci: &ConfidenceInterval) -> Cell {
        Cell::plain(
            CellValue::Pair([ci.lower, ci.upper]),
            format!("[{}, {}]", fixed(ci.lower, 2), fixed(ci.upper, 2)),
        )
    }

    /// Exact size followed by the approximate one, starred when invalid.
    fn size_with_alt(exact: &DesignResult, approx: &DesignResult) -> Cell {
        let valid = approx.is_valid();
        let star = if valid { "" } else { "*" };
        Cell {
            value: CellValue::Int(exact.size),
            display: format!("{} ({}{})", exact.size, approx.size, star),
            valid,
            alt: Some(approx.size),
        }
    }
}

/// Fixed-point formatting without a negative sign on zero.
fn fixed(x: f64, decimals: usize) -> String {
    let s = format!("{:.*}", decimals, x);
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// A generated (or golden) table in the JSON table schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderedTable {
    pub table_id: String,
    pub params: serde_json::Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl RenderedTable {
    /// Label columns at the start of every row.
    pub fn label_columns(&self) -> usize {
        self.headers.iter().take_while(|h| !is_value_header(h)).count()
    }
}

fn is_value_header(h: &str) -> bool {
    !matches!(h, "confidence" | "p" | "p_hat" | "p_upper" | "rho" | "r")
}

fn column_header(id: TableId, x: f64) -> String {
    match id.column_key() {
        Some("ns") => format!("N={}", x as u64),
        Some("events") => format!("E={}", x as u64),
        _ if matches!(id, TableId::CorrelationSize | TableId::LifetimeEvents) => x.to_string(),
        _ => format!("{}%", format_percent_trimmed(x)),
    }
}

const ONE_SIDED_HEADERS: [&str; 3] = ["clopper_pearson", "zero_acceptance", "chi2_approximation"];

fn count(x: f64) -> Result<u64> {
    if x >= 1.0 && x.fract() == 0.0 && x < 1e15 {
        Ok(x as u64)
    } else {
        Err(Error::domain("n", x, "grid sizes must be positive integers"))
    }
}

/// Evaluates one value cell of `id` for row group `g`, confidence `level`
/// and column parameter `x` (column index `j` for the one-sided table).
fn evaluate(spec: &TableSpec, g: f64, level: ConfidenceLevel, x: f64, j: usize) -> Result<Cell> {
    Ok(match spec.id {
        TableId::StdSize => Cell::size(stddev_sample_size(x, level)?.size),
        TableId::StdAccuracy => Cell::percent(stddev_precision(count(x)?, level)?),
        TableId::MeanSize => Cell::size(mean_sample_size(x, level)?.size),
        TableId::MeanAccuracy => Cell::percent(mean_precision(count(x)?, level)?),
        TableId::ProportionSize => Cell::size_with_alt(
            &proportion_sample_size_exact(g, x, level)?,
            &proportion_sample_size_normal(g, x, level, spec.continuity_correction)?,
        ),
        TableId::ProportionAccuracy | TableId::RareAccuracy => {
            Cell::interval_percent(&clopper_pearson_ci_for_rate(g, count(x)?, level, Sidedness::TwoSided)?)
        }
        TableId::RareSize => Cell::size_with_alt(
            &rare_proportion_sample_size_exact(g, x, level)?,
            &rare_proportion_sample_size_poisson(g, x, level)?,
        ),
        TableId::OneSided => {
            let bound = OneSidedBound::upper(g, level)?;
            let design = match j {
                0 => one_sided_exact_sample_size(bound)?,
                1 => zero_acceptance_sample_size(bound)?,
                _ => rule_of_three_sample_size(bound)?,
            };
            Cell::size(design.size)
        }
        TableId::CorrelationSize => Cell::size(correlation_sample_size(g, x, level)?.size),
        TableId::CorrelationAccuracy => Cell::interval(&correlation_ci(g, count(x)?, level)?),
        TableId::LifetimeEvents => Cell::size(lifetime_required_events(x, level)?.size),
        TableId::LifetimeAccuracy => Cell::interval(&lifetime_ci(1.0, count(x)?, level)?),
    })
}

/// Builds every cell of the table. Cells are computed in parallel and
/// assembled in grid order, so output is identical from run to run.
pub fn generate(spec: &TableSpec) -> Result<RenderedTable> {
    spec.validate()?;
    let id = spec.id;
    let grouped = id.group_key().is_some();

    let mut headers: Vec<String> = Vec::new();
    if let Some(h) = id.group_header() {
        headers.push(h.to_string());
    }
    headers.push("confidence".to_string());
    let columns: Vec<f64> = if id == TableId::OneSided {
        headers.extend(ONE_SIDED_HEADERS.iter().map(|s| s.to_string()));
        vec![f64::NAN; ONE_SIDED_HEADERS.len()]
    } else {
        headers.extend(spec.columns.iter().map(|&x| column_header(id, x)));
        spec.columns.clone()
    };

    let groups: Vec<Option<f64>> = if grouped {
        spec.groups.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let mut rows_meta = Vec::new();
    for &g in &groups {
        for &c in &spec.confidences {
            rows_meta.push((g, c));
        }
    }

    let tasks: Vec<(usize, usize)> = (0..rows_meta.len())
        .flat_map(|i| (0..columns.len()).map(move |j| (i, j)))
        .collect();
    let cells: Vec<Result<Cell>> = tasks
        .par_iter()
        .map(|&(i, j)| {
            let (g, c) = rows_meta[i];
            ConfidenceLevel::new(c)
                .and_then(|level| evaluate(spec, g.unwrap_or(f64::NAN), level, columns[j], j))
                .map_err(|e| Error::Cell {
                    table: id.as_str().to_string(),
                    row: i,
                    col: j,
                    source: Box::new(e),
                })
        })
        .collect();

    let mut cells = cells.into_iter();
    let mut rows = Vec::with_capacity(rows_meta.len());
    for &(g, c) in &rows_meta {
        let mut row = Vec::with_capacity(headers.len());
        if let Some(g) = g {
            row.push(if matches!(id, TableId::CorrelationSize | TableId::CorrelationAccuracy) {
                Cell::label_plain(g)
            } else {
                Cell::label_percent(g)
            });
        }
        row.push(Cell::label_percent(c));
        for _ in 0..columns.len() {
            row.push(cells.next().expect("one result per task")?);
        }
        rows.push(row);
    }

    Ok(RenderedTable {
        table_id: id.as_str().to_string(),
        params: spec.params(),
        headers,
        rows,
    })
}

/// [`generate`] on the default grid of every table.
pub fn generate_all() -> Result<Vec<RenderedTable>> {
    TableId::ALL
        .iter()
        .map(|&id| generate(&TableSpec::default_for(id)))
        .collect()
}
