use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RenderedTable;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Aligned plain text.
    Text,
    Csv,
    Tsv,
    Markdown,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "table" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            "markdown" | "md" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            _ => Err(Error::Unknown {
                what: "format",
                input: s.to_string(),
            }),
        }
    }
}

/// Renders a table. Output depends only on the table, never on the environment.
pub fn render(table: &RenderedTable, format: Format) -> String {
    match format {
        Format::Text => text(table),
        Format::Csv => delimited(table, b','),
        Format::Tsv => delimited(table, b'\t'),
        Format::Markdown => markdown(table),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(table).expect("tables serialize");
            s.push('\n');
            s
        }
    }
}

fn delimited(table: &RenderedTable, delimiter: u8) -> String {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(Vec::new());
    w.write_record(&table.headers).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.display.as_str())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// `33 (34*)` becomes `33 (~~34~~)`.
fn strike(display: &str) -> String {
    match display.strip_suffix("*)") {
        Some(head) => match head.rsplit_once('(') {
            Some((lead, alt)) => format!("{lead}(~~{alt}~~)"),
            None => display.to_string(),
        },
        None => display.to_string(),
    }
}

fn markdown(table: &RenderedTable) -> String {
    let labels = table.label_columns();
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", table.headers.join(" | "));
    let rule: Vec<&str> = (0..table.headers.len())
        .map(|j| if j < labels { ":--" } else { "--:" })
        .collect();
    let _ = writeln!(out, "| {} |", rule.join(" | "));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| strike(&c.display)).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

fn text(table: &RenderedTable) -> String {
    let labels = table.label_columns();
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.chars().count()).collect();
    for row in &table.rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.display.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(j, (c, &w))| if j < labels { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    let _ = writeln!(out, "{}", line(table.headers.iter().map(String::as_str).collect()));
    for row in &table.rows {
        let _ = writeln!(out, "{}", line(row.iter().map(|c| c.display.as_str()).collect()));
    }
    out
}
