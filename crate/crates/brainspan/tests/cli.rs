//! End-to-end runs of the command-line binary: exit codes, stream routing,
//! file formats, and byte-level determinism across repeated invocations.

use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

const BIN: &str = env!("CARGO_BIN_EXE_brainspan");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

/// Calibrated params file shared by every test in this binary.
fn params_file() -> &'static Path {
    static FIXTURE: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    let (_dir, path) = FIXTURE.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("fit.params");
        let out = run(&["calibrate", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "calibrate failed: {}", stderr(&out));
        (dir, path)
    });
    path
}

fn params_arg() -> &'static str {
    params_file().to_str().expect("utf-8 path")
}

#[test]
fn calibrate_is_deterministic_and_reports_progress() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.params");
    let b = dir.path().join("b.params");
    let first = run(&["calibrate", "--out", a.to_str().unwrap()]);
    let second = run(&["calibrate", "--out", b.to_str().unwrap()]);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(code(&second), 0, "{}", stderr(&second));
    assert!(stderr(&first).contains("calibrated"), "{}", stderr(&first));
    assert!(stderr(&first).contains("residuals"), "{}", stderr(&first));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_preset_writes_one_row_per_month() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "simulate",
            "--preset",
            "baseline",
            "--params",
            params_arg(),
            "--depth",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("month,log2_complexity,cognitive_depth")
    );
    assert_eq!(lines.count(), 1201);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_streams_csv_to_stdout_when_no_out_path() {
    let out = run(&["simulate", "--preset", "baseline", "--params", params_arg()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("month,log2_complexity\n"), "{text:.80}");
    assert_eq!(text.lines().count(), 1202);
}

#[test]
fn query_commands_print_anchor_months() {
    let cases = [
        (
            vec!["equiv-age", "--preset", "baseline", "--params", params_arg(), "--at", "1000"],
            138.0,
        ),
        (
            vec!["equiv-age", "--preset", "exp-weaken", "--params", params_arg(), "--at", "1000"],
            97.0,
        ),
        (
            vec!["find-peak", "--preset", "baseline", "--params", params_arg()],
            300.0,
        ),
        (vec!["intersect", "--params", params_arg()], 600.0),
    ];
    for (args, expected) in cases {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        let month: f64 = stdout(&out).trim().parse().expect("a month on stdout");
        assert!(
            (month - expected).abs() < 0.01,
            "{args:?} printed {month}, expected about {expected}"
        );
    }
}

#[test]
fn out_of_range_equivalent_age_exits_two() {
    let out = run(&[
        "equiv-age",
        "--preset",
        "sustained",
        "--params",
        params_arg(),
        "--at",
        "1000",
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("below"), "{}", stderr(&out));
    assert_eq!(stdout(&out), "");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let stale = dir.path().join("stale.params");
    let mut params: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(params_file()).unwrap()).unwrap();
    params["schema"] = json!(2);
    std::fs::write(&stale, serde_json::to_string(&params).unwrap()).unwrap();

    let unknown_preset = run(&[
        "equiv-age", "--preset", "bas", "--params", params_arg(), "--at", "1000",
    ]);
    assert_eq!(code(&unknown_preset), 1);
    assert!(
        stderr(&unknown_preset).contains("baseline, sudden-loss"),
        "{}",
        stderr(&unknown_preset)
    );

    let preset_without_params = run(&["find-peak", "--preset", "baseline"]);
    assert_eq!(code(&preset_without_params), 1);
    assert!(
        stderr(&preset_without_params).contains("--params"),
        "{}",
        stderr(&preset_without_params)
    );

    let missing_file = run(&["find-peak", "--scenario", "no/such/file.scn"]);
    assert_eq!(code(&missing_file), 1);

    let wrong_schema = run(&[
        "find-peak", "--preset", "baseline", "--params", stale.to_str().unwrap(),
    ]);
    assert_eq!(code(&wrong_schema), 1);
    assert!(stderr(&wrong_schema).contains("schema"), "{}", stderr(&wrong_schema));

    assert_eq!(code(&run(&["simulate", "--no-such-flag"])), 1);
    assert_eq!(code(&run(&[])), 1);
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("simulate"));
}

#[test]
fn scenario_files_drive_the_same_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("custom.scn");
    let scenario = json!({
        "schema": 1,
        "label": "custom",
        "growth": { "n_max": 1.0e6, "b": 0.0796, "tau_g": 61.2 },
        "mode": { "kind": "linear_exponent", "h": 6.666666666666667e-6 },
        "events": [
            { "kind": "sudden_loss", "month": 600.0, "fraction": 0.05 }
        ]
    });
    std::fs::write(&good, serde_json::to_string_pretty(&scenario).unwrap()).unwrap();

    let peak = run(&["find-peak", "--scenario", good.to_str().unwrap()]);
    assert_eq!(code(&peak), 0, "{}", stderr(&peak));
    let month: f64 = stdout(&peak).trim().parse().unwrap();
    assert!((month - 300.0).abs() < 20.0, "peak {month}");

    let csv = run(&["simulate", "--scenario", good.to_str().unwrap()]);
    assert_eq!(code(&csv), 0, "{}", stderr(&csv));
    assert!(stdout(&csv).lines().count() > 1000);

    let bad = dir.path().join("typo.scn");
    let mut wrong = scenario.clone();
    wrong["events"][0]["fractoin"] = wrong["events"][0]["fraction"].take();
    wrong["events"][0]
        .as_object_mut()
        .unwrap()
        .remove("fraction");
    std::fs::write(&bad, serde_json::to_string_pretty(&wrong).unwrap()).unwrap();
    let rejected = run(&["simulate", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(code(&rejected), 1);
    assert!(stderr(&rejected).contains("fractoin"), "{}", stderr(&rejected));
}

#[test]
fn compare_emits_one_report_per_preset() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "compare", "--params", params_arg(), "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let reports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let labels: Vec<&str> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["scenario_label"].as_str().unwrap())
        .collect();
    assert_eq!(
        labels,
        ["baseline", "sudden-loss", "exp-weaken", "combined", "sustained"]
    );
    let baseline_equiv = reports[0]["equivalent_ages"]["1000"].as_f64().unwrap();
    assert!((baseline_equiv - 138.0).abs() < 0.01, "{baseline_equiv}");
    assert!(
        reports[4]["equivalent_ages"]["1000"]["error"].is_string(),
        "sustained should carry an error note: {}",
        reports[4]
    );
}

#[test]
fn plot_renders_deterministic_svg_from_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base.csv");
    let weak = dir.path().join("weak.csv");
    for (preset, path) in [("baseline", &base), ("exp-weaken", &weak)] {
        let out = run(&[
            "simulate", "--preset", preset, "--params", params_arg(),
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for (path, mode) in [(&a, "log2"), (&b, "log2")] {
        let out = run(&[
            "plot",
            "--csv", base.to_str().unwrap(),
            "--csv", weak.to_str().unwrap(),
            "--y-mode", mode,
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polyline").count(), 2);

    let equiv = dir.path().join("equiv.svg");
    let out = run(&[
        "plot",
        "--csv", base.to_str().unwrap(),
        "--csv", weak.to_str().unwrap(),
        "--y-mode", "equivalent-age",
        "--out", equiv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(std::fs::read_to_string(&equiv)
        .unwrap()
        .contains("equivalent age (months)"));
}
