//! Command-line front end. One command per invocation; data goes to files
//! or stdout, diagnostics to stderr, and the exit code says what kind of
//! failure occurred: 0 success, 1 usage or input-file problem, 2
//! computation failure.

use crate::calibrate::{
    equivalent_age, find_intersection, find_peak, full_calibration, CalibrationTargets,
    RootFindConfig,
};
use crate::cognition::CognitionParams;
use crate::complexity::{simulate, simulate_with_depth, Trajectory};
use crate::config::{
    load_params, params_value, parse_scenario_file, save_params, CalibratedParams, ConfigError,
    ParamsIterations, ParamsResiduals,
};
use crate::error::Error;
use crate::output::{
    emit_plot_svg, read_trajectory_csv, trajectory_csv_string, write_trajectory_csv, OutputError,
    PlotOptions, YMode,
};
use crate::presets::{all_presets, preset, PRESET_NAMES};
use crate::report::{format_month, write_reports, EquivAge, ReportError, RunReport};
use crate::scenario::Scenario;
use crate::states::{enumerate_states, states_with_n_firing, total_states, MAX_ENUMERATED_NEURONS};
use crate::weakening::DEFAULT_WEAKENING_RATE;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
enum CliError {
    /// Bad arguments or unreadable/invalid input files. Exit code 1.
    Usage(String),
    /// The requested computation has no valid answer or failed to converge.
    /// Exit code 2.
    Compute(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OutputError> for CliError {
    fn from(e: OutputError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            // A bad sampling range is an argument problem, not a failed
            // computation.
            Error::InvalidRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "brainspan",
    version,
    about = "Deterministic simulator and calibration toolkit for lifespan neural-complexity curves",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a scenario's complexity curve to CSV
    Simulate(SimulateArgs),
    /// Fit growth, weakening, and depth-curve parameters; write a params file
    Calibrate(CalibrateArgs),
    /// Month on the baseline's ascending branch matching a scenario's value
    EquivAge(EquivAgeArgs),
    /// Month of a scenario's complexity maximum
    FindPeak(FindPeakArgs),
    /// Month where the raw depth curve meets the complexity curve
    Intersect(IntersectArgs),
    /// Evaluate the stock scenarios and write a JSON report
    Compare(CompareArgs),
    /// Exact firing-pattern counts for a small all-or-none population
    Enumerate(EnumerateArgs),
    /// Render trajectory CSVs as an SVG chart
    Plot(PlotArgs),
}

/// Where a scenario comes from: an explicit file or a named preset built
/// from calibrated params.
#[derive(Args)]
struct ScenarioSource {
    /// Scenario file (.scn)
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// Stock scenario name (requires --params)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

impl ScenarioSource {
    fn resolve(
        &self,
        params: Option<&CalibratedParams>,
    ) -> Result<(Scenario, Option<CognitionParams>), CliError> {
        match (&self.scenario, &self.preset) {
            (Some(path), _) => Ok(parse_scenario_file(path)?),
            (None, Some(name)) => {
                let p = params.ok_or_else(|| {
                    CliError::Usage("--preset requires --params for curve parameters".to_string())
                })?;
                let scenario = preset(name, p.growth, p.h, p.weaken_tau).ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown preset {name:?} (available: {})",
                        PRESET_NAMES.join(", ")
                    ))
                })?;
                Ok((scenario, Some(p.cognition)))
            }
            (None, None) => Err(CliError::Usage(
                "a scenario is required: pass --scenario FILE or --preset NAME".to_string(),
            )),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: ScenarioSource,
    /// Params file, required with --preset or --depth without a cognition block
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
    /// First sampled month
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    /// Last sampled month
    #[arg(long, default_value_t = 1200.0)]
    to: f64,
    /// Sampling step in months
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    /// Output CSV path (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Add the cognitive_depth column
    #[arg(long)]
    depth: bool,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Output params file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Weakening rate shared by both modes
    #[arg(long, value_name = "RATE", default_value_t = DEFAULT_WEAKENING_RATE)]
    weakening_rate: f64,
    /// Population ceiling (a free scale)
    #[arg(long, value_name = "N", default_value_t = 1.0e6)]
    n_max: f64,
}

#[derive(Args)]
struct EquivAgeArgs {
    #[command(flatten)]
    source: ScenarioSource,
    /// Baseline scenario file (defaults to the baseline preset from --params)
    #[arg(long, value_name = "FILE")]
    baseline: Option<PathBuf>,
    /// Query month
    #[arg(long, value_name = "MONTH")]
    at: f64,
    /// Params file
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct FindPeakArgs {
    #[command(flatten)]
    source: ScenarioSource,
    /// Params file (needed with --preset)
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct IntersectArgs {
    #[command(flatten)]
    source: ScenarioSource,
    /// Params file; supplies the baseline scenario and depth-curve
    /// parameters when the scenario file carries none
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Params file from `calibrate`
    #[arg(long, value_name = "FILE")]
    params: PathBuf,
    /// Report output path (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Equivalent-age query months (repeatable; default 1000)
    #[arg(long = "at", value_name = "MONTH")]
    ats: Vec<f64>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Population size
    #[arg(long)]
    neurons: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum YModeArg {
    /// Raw curve values
    Log2,
    /// Values mapped through the first curve's ascending branch
    EquivalentAge,
}

#[derive(Args)]
struct PlotArgs {
    /// Trajectory CSV (repeatable; first is the reference curve)
    #[arg(long = "csv", value_name = "FILE", required = true)]
    csvs: Vec<PathBuf>,
    /// Output SVG path
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Chart title
    #[arg(long, default_value = "complexity trajectories")]
    title: String,
    /// Vertical-axis interpretation
    #[arg(long, value_enum, default_value = "log2")]
    y_mode: YModeArg,
}

/// Parses and runs one invocation, returning the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::EquivAge(args) => cmd_equiv_age(args),
        Command::FindPeak(args) => cmd_find_peak(args),
        Command::Intersect(args) => cmd_intersect(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn load_optional_params(path: &Option<PathBuf>) -> Result<Option<CalibratedParams>, CliError> {
    Ok(match path {
        Some(p) => Some(load_params(p)?),
        None => None,
    })
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let params = load_optional_params(&args.params)?;
    let (scenario, file_cognition) = args.source.resolve(params.as_ref())?;
    let trajectory: Trajectory = if args.depth {
        let cognition = file_cognition
            .or(params.as_ref().map(|p| p.cognition))
            .ok_or_else(|| {
                CliError::Usage(
                    "--depth needs depth-curve parameters: add a cognition block to the scenario \
                     file or pass --params"
                        .to_string(),
                )
            })?;
        simulate_with_depth(&scenario, &cognition, args.from, args.to, args.step)?
    } else {
        simulate(&scenario, args.from, args.to, args.step)?
    };
    match &args.out {
        Some(path) => write_trajectory_csv(&trajectory, path)?,
        None => print!("{}", trajectory_csv_string(&trajectory)),
    }
    Ok(())
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<(), CliError> {
    let targets = CalibrationTargets::default();
    let cfg = RootFindConfig::default();
    let fit = full_calibration(&targets, args.weakening_rate, args.n_max, &cfg)?;
    let params = CalibratedParams {
        targets,
        growth: fit.growth,
        h: args.weakening_rate,
        weaken_tau: fit.weaken_tau,
        cognition: fit.cognition,
        residuals: ParamsResiduals {
            peak_month: fit.residual_peak,
            baseline_equiv_month: fit.residual_baseline_equiv,
            exp_weaken_equiv_month: fit.residual_weaken_equiv,
            intersection_month: fit.residual_intersection,
        },
        iterations: ParamsIterations {
            growth: fit.iterations_growth,
            weakening_tau: fit.iterations_weaken_tau,
            cognition: fit.iterations_cognition,
        },
        tool_version: TOOL_VERSION.to_string(),
    };
    save_params(&args.out, &params)?;
    eprintln!(
        "calibrated: b={:.9} tau_g={:.6} weaken_tau={:.6} k={:.6e} lambda={:.6e}",
        params.growth.b, params.growth.tau_g, params.weaken_tau, params.cognition.k,
        params.cognition.lambda
    );
    eprintln!(
        "residuals (months): peak={:+.2e} equiv={:+.2e} weaken-equiv={:+.2e} intersection={:+.2e}",
        params.residuals.peak_month,
        params.residuals.baseline_equiv_month,
        params.residuals.exp_weaken_equiv_month,
        params.residuals.intersection_month
    );
    Ok(())
}

fn resolve_baseline(
    explicit: &Option<PathBuf>,
    params: Option<&CalibratedParams>,
) -> Result<Scenario, CliError> {
    match explicit {
        Some(path) => Ok(parse_scenario_file(path)?.0),
        None => {
            let p = params.ok_or_else(|| {
                CliError::Usage(
                    "a baseline is required: pass --baseline FILE or --params FILE".to_string(),
                )
            })?;
            Ok(preset("baseline", p.growth, p.h, p.weaken_tau).expect("stock baseline"))
        }
    }
}

fn cmd_equiv_age(args: EquivAgeArgs) -> Result<(), CliError> {
    let params = load_optional_params(&args.params)?;
    let (scenario, _) = args.source.resolve(params.as_ref())?;
    let baseline = resolve_baseline(&args.baseline, params.as_ref())?;
    let month = equivalent_age(&scenario, args.at, &baseline, &RootFindConfig::default())?;
    println!("{month:.3}");
    Ok(())
}

fn cmd_find_peak(args: FindPeakArgs) -> Result<(), CliError> {
    let params = load_optional_params(&args.params)?;
    let (scenario, _) = args.source.resolve(params.as_ref())?;
    let month = find_peak(&scenario, &RootFindConfig::default())?;
    println!("{month:.3}");
    Ok(())
}

fn cmd_intersect(args: IntersectArgs) -> Result<(), CliError> {
    let params = load_optional_params(&args.params)?;
    let (scenario, file_cognition) =
        if args.source.scenario.is_none() && args.source.preset.is_none() {
            let p = params.as_ref().ok_or_else(|| {
                CliError::Usage(
                    "pass --scenario FILE, --preset NAME, or --params FILE for the baseline"
                        .to_string(),
                )
            })?;
            (
                preset("baseline", p.growth, p.h, p.weaken_tau).expect("stock baseline"),
                Some(p.cognition),
            )
        } else {
            args.source.resolve(params.as_ref())?
        };
    let cognition = file_cognition
        .or(params.as_ref().map(|p| p.cognition))
        .ok_or_else(|| {
            CliError::Usage(
                "depth-curve parameters required: add a cognition block to the scenario file or \
                 pass --params"
                    .to_string(),
            )
        })?;
    let month = find_intersection(&cognition, &scenario, &RootFindConfig::default())?;
    println!("{month:.3}");
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let params = load_params(&args.params)?;
    let cfg = RootFindConfig::default();
    let ats = if args.ats.is_empty() { vec![1000.0] } else { args.ats.clone() };
    let baseline = preset("baseline", params.growth, params.h, params.weaken_tau)
        .expect("stock baseline");
    let echo = params_value(&params);
    let mut reports = Vec::new();
    for scenario in all_presets(params.growth, params.h, params.weaken_tau) {
        let peak_month = find_peak(&scenario, &cfg)?;
        let mut equivalent_ages = BTreeMap::new();
        for &at in &ats {
            let entry = match equivalent_age(&scenario, at, &baseline, &cfg) {
                Ok(month) => EquivAge::Month(month),
                Err(e @ (Error::AboveRange { .. } | Error::BelowRange { .. })) => {
                    EquivAge::Unavailable { error: e.to_string() }
                }
                Err(other) => return Err(other.into()),
            };
            equivalent_ages.insert(format_month(at), entry);
        }
        let intersection_month = find_intersection(&params.cognition, &scenario, &cfg).ok();
        reports.push(RunReport {
            scenario_label: scenario.label.clone(),
            peak_month,
            equivalent_ages,
            intersection_month,
            params_used: echo.clone(),
            tool_version: TOOL_VERSION.to_string(),
        });
    }
    match &args.out {
        Some(path) => write_reports(path, &reports)?,
        None => {
            let mut text = serde_json::to_string_pretty(&reports).expect("serializable reports");
            text.push('\n');
            print!("{text}");
        }
    }
    Ok(())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), CliError> {
    let n = args.neurons;
    let histogram: Vec<u128> = if n <= MAX_ENUMERATED_NEURONS {
        enumerate_states(n).map_err(|e| CliError::Usage(e.to_string()))?.counts
    } else {
        (0..=n)
            .map(|k| states_with_n_firing(n, k))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?
    };
    let total = total_states(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let line: Vec<String> = histogram.iter().map(|c| c.to_string()).collect();
    println!("{}", line.join(" "));
    println!("total {total}");
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<(), CliError> {
    let mut trajectories = Vec::new();
    for path in &args.csvs {
        trajectories.push(read_trajectory_csv(path)?);
    }
    let options = PlotOptions {
        title: args.title.clone(),
        y_mode: match args.y_mode {
            YModeArg::Log2 => YMode::Log2,
            YModeArg::EquivalentAge => YMode::EquivalentAge,
        },
    };
    emit_plot_svg(&trajectories, &args.out, &options)?;
    Ok(())
}
