//! Scenario and params files: a small JSON-shaped dialect with a required
//! `"schema": 1` marker, unknown keys rejected, and diagnostics that name
//! the offending field (`events[0].fraction`) or carry the parser's
//! line/column.
//!
//! Wire shapes live here as private raw structs; the public API hands out
//! validated domain types only. Event and mode blocks are dispatched on a
//! `kind` string by hand because the field-presence rules differ per kind
//! and the diagnostics must say which field of which entry is wrong.

use crate::calibrate::CalibrationTargets;
use crate::cognition::CognitionParams;
use crate::error::Error;
use crate::growth::GrowthParams;
use crate::scenario::{validate_scenario, DamageEvent, Scenario};
use crate::weakening::WeakeningMode;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// The one scenario/params schema revision this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Failures in the file layer. These are input problems, not computation
/// problems, and the CLI maps them to the usage exit code.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Syntax { path: PathBuf, detail: String },
    #[error("{path}: schema violation at {field}: {detail}")]
    Schema {
        path: PathBuf,
        field: String,
        detail: String,
    },
    #[error("{path}: unsupported schema version {found} (this build reads version {SCHEMA_VERSION})")]
    SchemaVersion { path: PathBuf, found: u32 },
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawScenarioFile {
    schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    growth: RawGrowth,
    mode: RawMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    events: Vec<RawEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cognition: Option<RawCognition>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawGrowth {
    n_max: f64,
    b: f64,
    tau_g: f64,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    kind: String,
    h: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    month: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start_month: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monthly_rate: Option<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawCognition {
    k: f64,
    e: f64,
    l: f64,
    lambda: f64,
    k0: f64,
}

fn schema_err(path: &Path, field: impl Into<String>, detail: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        path: path.to_path_buf(),
        field: field.into(),
        detail: detail.into(),
    }
}

/// Maps a domain validation error onto the file field that caused it.
fn domain_err(path: &Path, prefix: &str, err: Error) -> ConfigError {
    let (field, detail) = match &err {
        Error::Parameter { name, .. } => (format!("{prefix}.{name}"), err.to_string()),
        Error::BracketNonPositive { .. } => (format!("{prefix}.l"), err.to_string()),
        _ => (prefix.to_string(), err.to_string()),
    };
    ConfigError::Schema {
        path: path.to_path_buf(),
        field,
        detail,
    }
}

fn mode_from_raw(path: &Path, raw: &RawMode) -> Result<WeakeningMode, ConfigError> {
    match raw.kind.as_str() {
        "linear_exponent" => {
            if raw.tau.is_some() {
                return Err(schema_err(path, "mode.tau", "linear_exponent takes no tau"));
            }
            WeakeningMode::linear(raw.h).map_err(|e| domain_err(path, "mode", e))
        }
        "double_exponential" => {
            let tau = raw.tau.ok_or_else(|| {
                schema_err(path, "mode.tau", "double_exponential requires tau")
            })?;
            WeakeningMode::double_exponential(raw.h, tau)
                .map_err(|e| domain_err(path, "mode", e))
        }
        other => Err(schema_err(
            path,
            "mode.kind",
            format!("unknown kind {other:?} (expected linear_exponent or double_exponential)"),
        )),
    }
}

fn event_from_raw(path: &Path, index: usize, raw: &RawEvent) -> Result<DamageEvent, ConfigError> {
    let require = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| {
            schema_err(
                path,
                format!("events[{index}].{name}"),
                format!("{} requires {name}", raw.kind),
            )
        })
    };
    let forbid = |name: &str, v: Option<f64>| {
        if v.is_some() {
            Err(schema_err(
                path,
                format!("events[{index}].{name}"),
                format!("{} takes no {name}", raw.kind),
            ))
        } else {
            Ok(())
        }
    };
    match raw.kind.as_str() {
        "sudden_loss" => {
            forbid("start_month", raw.start_month)?;
            forbid("monthly_rate", raw.monthly_rate)?;
            Ok(DamageEvent::SuddenLoss {
                month: require("month", raw.month)?,
                fraction: require("fraction", raw.fraction)?,
            })
        }
        "sustained_loss" => {
            forbid("month", raw.month)?;
            forbid("fraction", raw.fraction)?;
            Ok(DamageEvent::SustainedLoss {
                start_month: require("start_month", raw.start_month)?,
                monthly_rate: require("monthly_rate", raw.monthly_rate)?,
            })
        }
        other => Err(schema_err(
            path,
            format!("events[{index}].kind"),
            format!("unknown kind {other:?} (expected sudden_loss or sustained_loss)"),
        )),
    }
}

/// Reads and fully validates a scenario file. The label defaults to the
/// file stem when the file does not set one.
pub fn parse_scenario_file(
    path: &Path,
) -> Result<(Scenario, Option<CognitionParams>), ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawScenarioFile = serde_json::from_str(&text).map_err(|e| ConfigError::Syntax {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    if raw.schema != SCHEMA_VERSION {
        return Err(ConfigError::SchemaVersion {
            path: path.to_path_buf(),
            found: raw.schema,
        });
    }
    let growth = GrowthParams::new(raw.growth.n_max, raw.growth.b, raw.growth.tau_g)
        .map_err(|e| domain_err(path, "growth", e))?;
    let mode = mode_from_raw(path, &raw.mode)?;
    let mut events = Vec::with_capacity(raw.events.len());
    for (i, ev) in raw.events.iter().enumerate() {
        events.push(event_from_raw(path, i, ev)?);
    }
    let label = match &raw.label {
        Some(l) if !l.is_empty() => l.clone(),
        _ => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".to_string()),
    };
    let scenario = Scenario::new(growth, mode, &label).with_events(events);
    let violations = validate_scenario(&scenario);
    if let Some(v) = violations.first() {
        return Err(schema_err(path, v.field_path(), v.to_string()));
    }
    let cognition = match &raw.cognition {
        Some(c) => Some(
            CognitionParams::new(c.k, c.e, c.l, c.lambda, c.k0, &growth)
                .map_err(|e| domain_err(path, "cognition", e))?,
        ),
        None => None,
    };
    Ok((scenario, cognition))
}

/// Writes a scenario (and optionally its depth-curve parameters) in the
/// same format `parse_scenario_file` reads.
pub fn write_scenario_file(
    path: &Path,
    scenario: &Scenario,
    cognition: Option<&CognitionParams>,
) -> Result<(), ConfigError> {
    let mode = match scenario.mode {
        WeakeningMode::LinearExponent { h } => RawMode {
            kind: "linear_exponent".to_string(),
            h,
            tau: None,
        },
        WeakeningMode::DoubleExponential { h, tau } => RawMode {
            kind: "double_exponential".to_string(),
            h,
            tau: Some(tau),
        },
    };
    let events = scenario
        .events
        .iter()
        .map(|ev| match *ev {
            DamageEvent::SuddenLoss { month, fraction } => RawEvent {
                kind: "sudden_loss".to_string(),
                month: Some(month),
                fraction: Some(fraction),
                start_month: None,
                monthly_rate: None,
            },
            DamageEvent::SustainedLoss {
                start_month,
                monthly_rate,
            } => RawEvent {
                kind: "sustained_loss".to_string(),
                month: None,
                fraction: None,
                start_month: Some(start_month),
                monthly_rate: Some(monthly_rate),
            },
        })
        .collect();
    let raw = RawScenarioFile {
        schema: SCHEMA_VERSION,
        label: Some(scenario.label.clone()),
        growth: RawGrowth {
            n_max: scenario.growth.n_max,
            b: scenario.growth.b,
            tau_g: scenario.growth.tau_g,
        },
        mode,
        events,
        cognition: cognition.map(|c| RawCognition {
            k: c.k,
            e: c.e,
            l: c.l,
            lambda: c.lambda,
            k0: c.k0,
        }),
    };
    write_pretty_json(path, &raw)
}

/// Per-anchor residuals (months) left by the calibration solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsResiduals {
    pub peak_month: f64,
    pub baseline_equiv_month: f64,
    pub exp_weaken_equiv_month: f64,
    pub intersection_month: f64,
}

/// Iteration counts the solvers spent per stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsIterations {
    pub growth: usize,
    pub weakening_tau: usize,
    pub cognition: usize,
}

/// A fully validated calibration result as read from or written to a
/// params file.
#[derive(Debug, Clone)]
pub struct CalibratedParams {
    pub targets: CalibrationTargets,
    pub growth: GrowthParams,
    /// Weakening rate shared by both modes.
    pub h: f64,
    /// Time constant of the accelerated (double-exponential) mode.
    pub weaken_tau: f64,
    pub cognition: CognitionParams,
    pub residuals: ParamsResiduals,
    pub iterations: ParamsIterations,
    pub tool_version: String,
}

impl CalibratedParams {
    pub fn linear_mode(&self) -> WeakeningMode {
        WeakeningMode::LinearExponent { h: self.h }
    }

    pub fn accelerated_mode(&self) -> WeakeningMode {
        WeakeningMode::DoubleExponential {
            h: self.h,
            tau: self.weaken_tau,
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawParamsFile {
    schema: u32,
    tool_version: String,
    targets: CalibrationTargets,
    growth: RawGrowth,
    weakening: RawWeakening,
    cognition: RawCognition,
    residuals: ParamsResiduals,
    iterations: ParamsIterations,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawWeakening {
    h: f64,
    tau: f64,
}

/// Reads and fully validates a params file written by `save_params`.
pub fn load_params(path: &Path) -> Result<CalibratedParams, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawParamsFile = serde_json::from_str(&text).map_err(|e| ConfigError::Syntax {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    if raw.schema != SCHEMA_VERSION {
        return Err(ConfigError::SchemaVersion {
            path: path.to_path_buf(),
            found: raw.schema,
        });
    }
    let growth = GrowthParams::new(raw.growth.n_max, raw.growth.b, raw.growth.tau_g)
        .map_err(|e| domain_err(path, "growth", e))?;
    WeakeningMode::linear(raw.weakening.h).map_err(|e| domain_err(path, "weakening", e))?;
    WeakeningMode::double_exponential(raw.weakening.h, raw.weakening.tau)
        .map_err(|e| domain_err(path, "weakening", e))?;
    let cognition = CognitionParams::new(
        raw.cognition.k,
        raw.cognition.e,
        raw.cognition.l,
        raw.cognition.lambda,
        raw.cognition.k0,
        &growth,
    )
    .map_err(|e| domain_err(path, "cognition", e))?;
    raw.targets
        .validate()
        .map_err(|e| domain_err(path, "targets", e))?;
    Ok(CalibratedParams {
        targets: raw.targets,
        growth,
        h: raw.weakening.h,
        weaken_tau: raw.weakening.tau,
        cognition,
        residuals: raw.residuals,
        iterations: raw.iterations,
        tool_version: raw.tool_version,
    })
}

fn raw_params(params: &CalibratedParams) -> RawParamsFile {
    RawParamsFile {
        schema: SCHEMA_VERSION,
        tool_version: params.tool_version.clone(),
        targets: params.targets,
        growth: RawGrowth {
            n_max: params.growth.n_max,
            b: params.growth.b,
            tau_g: params.growth.tau_g,
        },
        weakening: RawWeakening {
            h: params.h,
            tau: params.weaken_tau,
        },
        cognition: RawCognition {
            k: params.cognition.k,
            e: params.cognition.e,
            l: params.cognition.l,
            lambda: params.cognition.lambda,
            k0: params.cognition.k0,
        },
        residuals: params.residuals,
        iterations: params.iterations,
    }
}

/// Writes a params file in the format `load_params` reads.
pub fn save_params(path: &Path, params: &CalibratedParams) -> Result<(), ConfigError> {
    write_pretty_json(path, &raw_params(params))
}

/// The params-file JSON as an in-memory value, for embedding a full
/// parameter echo inside reports.
pub fn params_value(params: &CalibratedParams) -> serde_json::Value {
    serde_json::to_value(raw_params(params)).expect("params serialize")
}

fn write_pretty_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ConfigError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| ConfigError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new()
            .suffix(".scn")
            .tempfile()
            .unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const MINIMAL: &str = r#"{
        "schema": 1,
        "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
        "mode": {"kind": "linear_exponent", "h": 6.7e-6}
    }"#;

    #[test]
    fn minimal_file_yields_event_free_scenario() {
        let f = write_temp(MINIMAL);
        let (scenario, cognition) = parse_scenario_file(f.path()).unwrap();
        assert!(scenario.events.is_empty());
        assert!(cognition.is_none());
        assert!(matches!(scenario.mode, WeakeningMode::LinearExponent { .. }));
        let stem = f.path().file_stem().unwrap().to_string_lossy();
        assert_eq!(scenario.label, stem);
    }

    #[test]
    fn combined_scenario_file_parses_to_event_list() {
        let f = write_temp(
            r#"{
            "schema": 1,
            "label": "combined",
            "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
            "mode": {"kind": "double_exponential", "h": 6.7e-6, "tau": 133.6},
            "events": [{"kind": "sudden_loss", "month": 600, "fraction": 0.05}]
        }"#,
        );
        let (scenario, _) = parse_scenario_file(f.path()).unwrap();
        assert_eq!(scenario.label, "combined");
        assert!(matches!(scenario.mode, WeakeningMode::DoubleExponential { .. }));
        assert_eq!(
            scenario.events,
            vec![DamageEvent::SuddenLoss { month: 600.0, fraction: 0.05 }]
        );
    }

    #[test]
    fn out_of_range_fraction_names_the_field() {
        let f = write_temp(
            r#"{
            "schema": 1,
            "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
            "mode": {"kind": "linear_exponent", "h": 6.7e-6},
            "events": [{"kind": "sudden_loss", "month": 600, "fraction": 1.5}]
        }"#,
        );
        let err = parse_scenario_file(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("events[0].fraction"), "got: {msg}");
    }

    #[test]
    fn unknown_top_level_key_is_rejected() {
        let f = write_temp(
            r#"{
            "schema": 1,
            "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
            "mode": {"kind": "linear_exponent", "h": 6.7e-6},
            "grwoth": 3
        }"#,
        );
        let err = parse_scenario_file(f.path()).unwrap_err();
        assert!(err.to_string().contains("grwoth"), "got: {err}");
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let f = write_temp("{\n  \"schema\": 1,\n  oops\n}");
        let err = parse_scenario_file(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "got: {msg}");
    }

    #[test]
    fn wrong_schema_version_is_refused() {
        let f = write_temp(
            r#"{
            "schema": 2,
            "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
            "mode": {"kind": "linear_exponent", "h": 6.7e-6}
        }"#,
        );
        let err = parse_scenario_file(f.path()).unwrap_err();
        assert!(matches!(err, ConfigError::SchemaVersion { found: 2, .. }));
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = parse_scenario_file(Path::new("/nonexistent/x.scn")).unwrap_err();
        assert!(matches!(err, ConfigError::Read { .. }));
        assert!(err.to_string().contains("/nonexistent/x.scn"));
    }

    #[test]
    fn kind_specific_fields_are_enforced_both_ways() {
        let missing = write_temp(
            r#"{
            "schema": 1,
            "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
            "mode": {"kind": "linear_exponent", "h": 6.7e-6},
            "events": [{"kind": "sudden_loss", "month": 600}]
        }"#,
        );
        let err = parse_scenario_file(missing.path()).unwrap_err();
        assert!(err.to_string().contains("events[0].fraction"), "got: {err}");

        let extra = write_temp(
            r#"{
            "schema": 1,
            "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
            "mode": {"kind": "linear_exponent", "h": 6.7e-6},
            "events": [{"kind": "sustained_loss", "start_month": 300, "monthly_rate": 5e-4, "fraction": 0.1}]
        }"#,
        );
        let err = parse_scenario_file(extra.path()).unwrap_err();
        assert!(err.to_string().contains("events[0].fraction"), "got: {err}");
    }

    #[test]
    fn linear_mode_rejects_a_stray_tau() {
        let f = write_temp(
            r#"{
            "schema": 1,
            "growth": {"n_max": 1e6, "b": 0.08, "tau_g": 61.0},
            "mode": {"kind": "linear_exponent", "h": 6.7e-6, "tau": 100}
        }"#,
        );
        let err = parse_scenario_file(f.path()).unwrap_err();
        assert!(err.to_string().contains("mode.tau"), "got: {err}");
    }

    #[test]
    fn scenario_files_round_trip() {
        let growth = GrowthParams::new(1.0e6, 0.08, 61.0).unwrap();
        let mode = WeakeningMode::double_exponential(6.7e-6, 133.6).unwrap();
        let scenario = Scenario::new(growth, mode, "combined").with_events(vec![
            DamageEvent::SuddenLoss { month: 600.0, fraction: 0.05 },
        ]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("combined.scn");
        write_scenario_file(&path, &scenario, None).unwrap();
        let (reread, cognition) = parse_scenario_file(&path).unwrap();
        assert_eq!(reread, scenario);
        assert!(cognition.is_none());
    }

    #[test]
    fn params_files_round_trip() {
        let growth = GrowthParams::new(1.0e6, 0.0795530, 61.17573).unwrap();
        let cognition = CognitionParams::new(9.2e4, 1.0, 4.5e-10, 3.96e-3, 1.0, &growth).unwrap();
        let params = CalibratedParams {
            targets: CalibrationTargets::default(),
            growth,
            h: 0.0001 / 15.0,
            weaken_tau: 133.6432,
            cognition,
            residuals: ParamsResiduals {
                peak_month: 1e-4,
                baseline_equiv_month: -2e-4,
                exp_weaken_equiv_month: 3e-5,
                intersection_month: 4e-4,
            },
            iterations: ParamsIterations { growth: 6, weakening_tau: 21, cognition: 1 },
            tool_version: "0.1.0".to_string(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fit.params");
        save_params(&path, &params).unwrap();
        let reread = load_params(&path).unwrap();
        assert_eq!(reread.growth, params.growth);
        assert_eq!(reread.weaken_tau, params.weaken_tau);
        assert_eq!(reread.cognition, params.cognition);
        assert_eq!(reread.residuals, params.residuals);
        assert_eq!(reread.iterations, params.iterations);
        assert_eq!(reread.tool_version, params.tool_version);
        assert_eq!(reread.targets, params.targets);
    }

    #[test]
    fn params_file_with_negative_b_is_a_schema_error() {
        let growth = GrowthParams::new(1.0e6, 0.08, 61.0).unwrap();
        let cognition = CognitionParams::new(1.0, 1.0, 0.0, 1e-3, 1.0, &growth).unwrap();
        let params = CalibratedParams {
            targets: CalibrationTargets::default(),
            growth,
            h: 6.7e-6,
            weaken_tau: 133.0,
            cognition,
            residuals: ParamsResiduals {
                peak_month: 0.0,
                baseline_equiv_month: 0.0,
                exp_weaken_equiv_month: 0.0,
                intersection_month: 0.0,
            },
            iterations: ParamsIterations { growth: 1, weakening_tau: 1, cognition: 1 },
            tool_version: "0.1.0".to_string(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fit.params");
        save_params(&path, &params).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let broken = text.replace("\"b\": 0.08", "\"b\": -0.08");
        assert_ne!(text, broken);
        std::fs::write(&path, broken).unwrap();
        let err = load_params(&path).unwrap_err();
        assert!(err.to_string().contains("growth.b"), "got: {err}");
    }
}
