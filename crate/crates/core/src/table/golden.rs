use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{generate, CellValue, RenderedTable, TableId, TableSpec};
use crate::error::{Error, Result};

/// Directory that replaces the built-in golden tables when set.
pub const GOLDEN_DIR_ENV: &str = "PILOTSIZE_GOLDEN_DIR";

const ERRATA_FILE: &str = "errata.json";

macro_rules! embedded {
    ($($id:ident => $file:literal),* $(,)?) => {
        fn embedded(id: TableId) -> &'static str {
            match id {
                $(TableId::$id => include_str!(concat!("../../golden/v1/", $file, ".json")),)*
            }
        }
    };
}

embedded! {
    StdSize => "T1_std_size",
    StdAccuracy => "T2_std_acc",
    MeanSize => "T3_mean_size",
    MeanAccuracy => "T4_mean_acc",
    ProportionSize => "T5_prop_size",
    ProportionAccuracy => "T6_prop_acc",
    RareSize => "T7_rare_size",
    RareAccuracy => "T8_rare_acc",
    OneSided => "T9_one_sided",
    CorrelationSize => "T10_corr_size",
    CorrelationAccuracy => "T11_corr_acc",
    LifetimeEvents => "T12_life_events",
    LifetimeAccuracy => "T13_life_acc",
}

const EMBEDDED_ERRATA: &str = include_str!("../../golden/v1/errata.json");

pub fn golden_dir_override() -> Option<PathBuf> {
    std::env::var_os(GOLDEN_DIR_ENV).map(PathBuf::from)
}

fn read_override(name: &str) -> Result<Option<(PathBuf, String)>> {
    let Some(dir) = golden_dir_override() else {
        return Ok(None);
    };
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Golden {
        path: path.clone(),
        message: e.to_string(),
    })?;
    Ok(Some((path, text)))
}

fn golden_text(id: TableId) -> Result<(PathBuf, String)> {
    let name = format!("{}.json", id.as_str());
    match read_override(&name)? {
        Some(found) => Ok(found),
        None => Ok((PathBuf::from(format!("<built-in>/{name}")), embedded(id).to_string())),
    }
}

/// The stored copy of a table.
pub fn load_golden(id: TableId) -> Result<RenderedTable> {
    let (path, text) = golden_text(id)?;
    serde_json::from_str(&text).map_err(|e| Error::Golden {
        path,
        message: e.to_string(),
    })
}

/// SHA-256 over every golden file, in table order.
pub fn golden_checksum() -> Result<String> {
    let mut hasher = Sha256::new();
    for id in TableId::ALL {
        hasher.update(golden_text(id)?.1.as_bytes());
    }
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// Allowed absolute differences between a regenerated and a stored cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub value: f64,
    /// For the parenthesised approximate sizes.
    pub alt: f64,
}

impl Tolerance {
    /// Policy per table: integer sizes exactly, exact-binomial sizes to one
    /// unit, percentages to 0.01 points, proportion intervals to 0.05
    /// points, and two-decimal intervals to one unit of the last digit.
    pub fn for_table(id: TableId) -> Tolerance {
        let value = match id {
            TableId::StdSize
            | TableId::MeanSize
            | TableId::OneSided
            | TableId::CorrelationSize
            | TableId::LifetimeEvents => 0.0,
            TableId::StdAccuracy | TableId::MeanAccuracy => 1e-4,
            TableId::ProportionSize | TableId::RareSize => 1.0,
            TableId::ProportionAccuracy | TableId::RareAccuracy => 5e-4,
            TableId::CorrelationAccuracy | TableId::LifetimeAccuracy => 1e-2,
        };
        Tolerance { value, alt: 0.0 }
    }
}

/// A cell that differs from the stored table by more than the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub table_id: String,
    pub row: usize,
    pub col: usize,
    /// Label cells of the row, e.g. `10%, 95%`.
    pub row_label: String,
    pub column: String,
    /// `value`, `alt`, `valid`, `label` or `shape`.
    pub field: String,
    pub expected: Value,
    pub actual: Value,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} [{} | {}] {}: expected {}, got {}",
            self.table_id, self.row_label, self.column, self.field, self.expected, self.actual
        )
    }
}

fn as_numbers(v: &CellValue) -> Vec<f64> {
    match *v {
        CellValue::Int(n) => vec![n as f64],
        CellValue::Real(x) => vec![x],
        CellValue::Pair([a, b]) => vec![a, b],
    }
}

fn within(expected: &CellValue, actual: &CellValue, tol: f64) -> bool {
    let (e, a) = (as_numbers(expected), as_numbers(actual));
    // The slack absorbs binary representation of decimal tolerances.
    e.len() == a.len() && e.iter().zip(&a).all(|(x, y)| (x - y).abs() <= tol + 1e-9)
}

/// Cell-by-cell comparison of two tables of the same shape.
pub fn diff_tables(expected: &RenderedTable, actual: &RenderedTable, tol: Tolerance) -> Vec<Mismatch> {
    let mut out = Vec::new();
    let shape = |e: Value, a: Value| Mismatch {
        table_id: expected.table_id.clone(),
        row: 0,
        col: 0,
        row_label: String::new(),
        column: String::new(),
        field: "shape".into(),
        expected: e,
        actual: a,
    };
    if expected.headers != actual.headers {
        out.push(shape(json!(expected.headers), json!(actual.headers)));
        return out;
    }
    if expected.rows.len() != actual.rows.len() {
        out.push(shape(json!(expected.rows.len()), json!(actual.rows.len())));
        return out;
    }
    let labels = expected.label_columns();
    for (i, (erow, arow)) in expected.rows.iter().zip(&actual.rows).enumerate() {
        let row_label = erow
            .iter()
            .take(labels)
            .map(|c| c.display.as_str())
            .collect::<Vec<_>>()
            .join(", ");
        if erow.len() != arow.len() {
            out.push(shape(json!(erow.len()), json!(arow.len())));
            continue;
        }
        for (j, (e, a)) in erow.iter().zip(arow).enumerate() {
            let mut push = |field: &str, ev: Value, av: Value| {
                out.push(Mismatch {
                    table_id: expected.table_id.clone(),
                    row: i,
                    col: j,
                    row_label: row_label.clone(),
                    column: expected.headers[j].clone(),
                    field: field.into(),
                    expected: ev,
                    actual: av,
                })
            };
            if j < labels {
                if !within(&e.value, &a.value, 0.0) {
                    push("label", json!(e.value), json!(a.value));
                }
                continue;
            }
            if !within(&e.value, &a.value, tol.value) {
                push("value", json!(e.value), json!(a.value));
            }
            match (e.alt, a.alt) {
                (Some(x), Some(y)) if (x as f64 - y as f64).abs() <= tol.alt => {}
                (None, None) => {}
                (x, y) => push("alt", json!(x), json!(y)),
            }
            if e.valid != a.valid {
                push("valid", json!(e.valid), json!(a.valid));
            }
        }
    }
    out
}

/// Regenerates a table on its default grid and compares it with the stored copy.
pub fn diff_against_golden(id: TableId) -> Result<Vec<Mismatch>> {
    let golden = load_golden(id)?;
    let actual = generate(&TableSpec::default_for(id))?;
    Ok(diff_tables(&golden, &actual, Tolerance::for_table(id)))
}

/// A stored cell known not to be reproducible from its formula, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Erratum {
    pub table_id: String,
    pub row: usize,
    pub col: usize,
    pub field: String,
    pub printed: Value,
    pub reproduced: Value,
    pub note: String,
}

impl Erratum {
    pub fn matches(&self, m: &Mismatch) -> bool {
        self.table_id == m.table_id && self.row == m.row && self.col == m.col && self.field == m.field
    }
}

/// Stored cells that disagree with every formula that reproduces the rest of their table.
pub fn errata() -> Result<Vec<Erratum>> {
    let (path, text) = match read_override(ERRATA_FILE) {
        Ok(Some(found)) => found,
        // A golden directory without an errata file simply has none.
        Err(_) => return Ok(Vec::new()),
        Ok(None) => (PathBuf::from("<built-in>/errata.json"), EMBEDDED_ERRATA.to_string()),
    };
    serde_json::from_str(&text).map_err(|e| Error::Golden {
        path,
        message: e.to_string(),
    })
}

/// Outcome of regenerating one table against its stored copy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub table_id: String,
    /// Number of compared value cells.
    pub cells: usize,
    /// Mismatches explained by a recorded erratum.
    pub known: Vec<Mismatch>,
    /// Mismatches with no recorded explanation.
    pub unexplained: Vec<Mismatch>,
}

impl Reproduction {
    pub fn is_exact(&self) -> bool {
        self.known.is_empty() && self.unexplained.is_empty()
    }
}

/// Regenerates every table on its default grid and sorts the differences
/// from the stored copies into known errata and unexplained ones.
pub fn check_reproduction() -> Result<Vec<Reproduction>> {
    let errata = errata()?;
    let tables = super::generate_all()?;
    TableId::ALL
        .iter()
        .zip(tables)
        .map(|(&id, actual)| {
            let golden = load_golden(id)?;
            let cells = golden.rows.iter().map(|r| r.len().saturating_sub(golden.label_columns())).sum();
            let (known, unexplained) = diff_tables(&golden, &actual, Tolerance::for_table(id))
                .into_iter()
                .partition(|m| errata.iter().any(|e| e.matches(m)));
            Ok(Reproduction {
                table_id: id.as_str().to_string(),
                cells,
                known,
                unexplained,
            })
        })
        .collect()
}
