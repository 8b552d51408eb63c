//! Run reports: the JSON summary `compare` emits, echoing the complete
//! parameter set so every number in it can be reproduced from the report
//! alone.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// An equivalent-age entry. Some scenarios sink below the baseline's
/// ascending branch at the query month and have no equivalent age; the
/// report keeps the reason instead of a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EquivAge {
    Month(f64),
    Unavailable { error: String },
}

/// Summary of one scenario evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub scenario_label: String,
    pub peak_month: f64,
    /// Keyed by the query month rendered via [`format_month`].
    pub equivalent_ages: BTreeMap<String, EquivAge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_month: Option<f64>,
    /// Full parameter echo in the params-file layout.
    pub params_used: serde_json::Value,
    pub tool_version: String,
}

/// Canonical key rendering for equivalent-age maps: whole months print
/// without a decimal point, anything else with three decimals.
pub fn format_month(month: f64) -> String {
    if (month - month.round()).abs() < 1e-9 {
        format!("{}", month.round() as i64)
    } else {
        format!("{month:.3}")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Parse { path: PathBuf, detail: String },
}

/// Writes reports as a pretty-printed JSON array, one element per scenario,
/// with a trailing newline. Deterministic for identical inputs.
pub fn write_reports(path: &Path, reports: &[RunReport]) -> Result<(), ReportError> {
    let mut text = serde_json::to_string_pretty(reports).expect("serializable reports");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| ReportError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_reports(path: &Path) -> Result<Vec<RunReport>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| ReportError::Parse {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })
}
