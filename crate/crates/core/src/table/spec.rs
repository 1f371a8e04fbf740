use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// The thirteen reproducible design tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableId {
    #[serde(rename = "T1_std_size")]
    StdSize,
    #[serde(rename = "T2_std_acc")]
    StdAccuracy,
    #[serde(rename = "T3_mean_size")]
    MeanSize,
    #[serde(rename = "T4_mean_acc")]
    MeanAccuracy,
    #[serde(rename = "T5_prop_size")]
    ProportionSize,
    #[serde(rename = "T6_prop_acc")]
    ProportionAccuracy,
    #[serde(rename = "T7_rare_size")]
    RareSize,
    #[serde(rename = "T8_rare_acc")]
    RareAccuracy,
    #[serde(rename = "T9_one_sided")]
    OneSided,
    #[serde(rename = "T10_corr_size")]
    CorrelationSize,
    #[serde(rename = "T11_corr_acc")]
    CorrelationAccuracy,
    #[serde(rename = "T12_life_events")]
    LifetimeEvents,
    #[serde(rename = "T13_life_acc")]
    LifetimeAccuracy,
}

impl TableId {
    pub const ALL: [TableId; 13] = [
        TableId::StdSize,
        TableId::StdAccuracy,
        TableId::MeanSize,
        TableId::MeanAccuracy,
        TableId::ProportionSize,
        TableId::ProportionAccuracy,
        TableId::RareSize,
        TableId::RareAccuracy,
        TableId::OneSided,
        TableId::CorrelationSize,
        TableId::CorrelationAccuracy,
        TableId::LifetimeEvents,
        TableId::LifetimeAccuracy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::StdSize => "T1_std_size",
            TableId::StdAccuracy => "T2_std_acc",
            TableId::MeanSize => "T3_mean_size",
            TableId::MeanAccuracy => "T4_mean_acc",
            TableId::ProportionSize => "T5_prop_size",
            TableId::ProportionAccuracy => "T6_prop_acc",
            TableId::RareSize => "T7_rare_size",
            TableId::RareAccuracy => "T8_rare_acc",
            TableId::OneSided => "T9_one_sided",
            TableId::CorrelationSize => "T10_corr_size",
            TableId::CorrelationAccuracy => "T11_corr_acc",
            TableId::LifetimeEvents => "T12_life_events",
            TableId::LifetimeAccuracy => "T13_life_acc",
        }
    }

    /// `T1` .. `T13`.
    pub fn short(self) -> &'static str {
        self.as_str().split('_').next().unwrap_or_default()
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::StdSize => "Sample size to estimate a standard deviation",
            TableId::StdAccuracy => "Relative precision of a standard deviation",
            TableId::MeanSize => "Sample size to estimate a mean",
            TableId::MeanAccuracy => "Precision of a mean, in standard deviations",
            TableId::ProportionSize => "Sample size for a proportion: exact (normal with continuity correction)",
            TableId::ProportionAccuracy => "Exact confidence interval for a proportion",
            TableId::RareSize => "Sample size for a rare proportion: exact (Poisson)",
            TableId::RareAccuracy => "Exact confidence interval for a rare proportion",
            TableId::OneSided => "Sample size to certify an upper bound with zero events",
            TableId::CorrelationSize => "Sample size to estimate a correlation",
            TableId::CorrelationAccuracy => "Confidence interval for a correlation",
            TableId::LifetimeEvents => "Events needed to estimate a mean lifetime",
            TableId::LifetimeAccuracy => "Confidence interval for a mean lifetime, relative to the estimate",
        }
    }

    /// Name of the row-group parameter, for tables that have one.
    pub(crate) fn group_key(self) -> Option<&'static str> {
        match self {
            TableId::ProportionSize | TableId::RareSize => Some("ps"),
            TableId::ProportionAccuracy | TableId::RareAccuracy => Some("p_hats"),
            TableId::OneSided => Some("upper_bounds"),
            TableId::CorrelationSize => Some("rhos"),
            TableId::CorrelationAccuracy => Some("rs"),
            _ => None,
        }
    }

    /// Header of the row-group label column.
    pub(crate) fn group_header(self) -> Option<&'static str> {
        match self {
            TableId::ProportionSize | TableId::RareSize => Some("p"),
            TableId::ProportionAccuracy | TableId::RareAccuracy => Some("p_hat"),
            TableId::OneSided => Some("p_upper"),
            TableId::CorrelationSize => Some("rho"),
            TableId::CorrelationAccuracy => Some("r"),
            _ => None,
        }
    }

    /// Name of the column parameter. The one-sided table has fixed columns.
    pub(crate) fn column_key(self) -> Option<&'static str> {
        match self {
            TableId::StdSize | TableId::MeanSize | TableId::ProportionSize | TableId::CorrelationSize => {
                Some("deltas")
            }
            TableId::RareSize | TableId::LifetimeEvents => Some("ks"),
            TableId::LifetimeAccuracy => Some("events"),
            TableId::OneSided => None,
            _ => Some("ns"),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = Error;

    /// Accepts the full id (`T1_std_size`) or its prefix (`T1`), in any case.
    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s) || id.short().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTable(s.to_string()))
    }
}

const CONFIDENCES: [f64; 3] = [0.90, 0.95, 0.99];
const PILOT_NS: [f64; 6] = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
const LOCATION_DELTAS: [f64; 6] = [0.01, 0.05, 0.10, 0.20, 0.50, 1.00];
const TENTHS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn steps(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    // Rounded to two decimals so grid values print and compare cleanly.
    (0..=n).map(|i| ((from + i as f64 * step) * 100.0).round() / 100.0).collect()
}

/// A table together with the parameter grid it is evaluated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub id: TableId,
    pub confidences: Vec<f64>,
    /// Row groups (`p`, `p̂`, `p_U`, `ρ` or `r`); empty for ungrouped tables.
    pub groups: Vec<f64>,
    /// Column parameter (`δ`, `k`, `N` or `E`); empty for the one-sided table.
    pub columns: Vec<f64>,
    /// Only used by the central proportion table.
    pub continuity_correction: bool,
}

impl TableSpec {
    /// The grid of the published table.
    pub fn default_for(id: TableId) -> TableSpec {
        let (groups, columns): (Vec<f64>, Vec<f64>) = match id {
            TableId::StdSize | TableId::MeanSize => (vec![], LOCATION_DELTAS.to_vec()),
            TableId::StdAccuracy | TableId::MeanAccuracy | TableId::LifetimeAccuracy => {
                (vec![], PILOT_NS.to_vec())
            }
            TableId::ProportionSize => (steps(0.10, 0.50, 0.05), vec![0.01, 0.05, 0.10, 0.15, 0.20, 0.25]),
            TableId::ProportionAccuracy => (steps(0.10, 0.90, 0.05), PILOT_NS.to_vec()),
            TableId::RareSize => (vec![0.05, 0.025, 0.01], vec![0.10, 0.25, 0.50, 1.00]),
            TableId::RareAccuracy => (vec![0.01, 0.025, 0.05, 0.95, 0.975, 0.99], PILOT_NS.to_vec()),
            TableId::OneSided => (vec![0.05, 0.025, 0.01], vec![]),
            TableId::CorrelationSize => (TENTHS.to_vec(), vec![0.1, 0.2, 0.3, 0.4, 0.5]),
            TableId::CorrelationAccuracy => (TENTHS.to_vec(), PILOT_NS.to_vec()),
            TableId::LifetimeEvents => (vec![], vec![0.1, 0.2, 0.3, 0.4, 0.5]),
        };
        TableSpec {
            id,
            confidences: CONFIDENCES.to_vec(),
            groups,
            columns,
            continuity_correction: true,
        }
    }

    pub fn with_confidences(mut self, confidences: Vec<f64>) -> Self {
        self.confidences = confidences;
        self
    }

    pub fn with_groups(mut self, groups: Vec<f64>) -> Self {
        self.groups = groups;
        self
    }

    pub fn with_columns(mut self, columns: Vec<f64>) -> Self {
        self.columns = columns;
        self
    }

    pub fn with_continuity_correction(mut self, on: bool) -> Self {
        self.continuity_correction = on;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let table = self.id.as_str().to_string();
        if self.confidences.is_empty() {
            return Err(Error::EmptyGrid { table, axis: "confidences" });
        }
        if let Some(key) = self.id.group_key() {
            if self.groups.is_empty() {
                return Err(Error::EmptyGrid { table, axis: key });
            }
        }
        if let Some(key) = self.id.column_key() {
            if self.columns.is_empty() {
                return Err(Error::EmptyGrid { table, axis: key });
            }
        }
        Ok(())
    }

    /// Grid description in the layout of the JSON table schema.
    pub fn params(&self) -> Value {
        let mut params = json!({ "confidences": self.confidences });
        if let Some(key) = self.id.group_key() {
            params[key] = json!(self.groups);
        }
        if let Some(key) = self.id.column_key() {
            if key == "ns" || key == "events" {
                params[key] = json!(self.columns.iter().map(|&c| c as u64).collect::<Vec<_>>());
            } else {
                params[key] = json!(self.columns);
            }
        }
        if self.id == TableId::ProportionSize {
            params["continuity_correction"] = json!(self.continuity_correction);
        }
        params
    }
}
