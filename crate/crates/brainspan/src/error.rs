use thiserror::Error;

/// Failures surfaced by the model and calibration layers.
///
/// Configuration-file and CLI-usage problems live in [`crate::config::ConfigError`];
/// everything here is a computation-level failure.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor was handed a value outside its documented domain.
    #[error("parameter `{name}` = {value} violates: {constraint}")]
    Parameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The curve has its maximum on the boundary of the scan window, so there
    /// is no interior peak to report.
    #[error("curve has no interior maximum on [0, {horizon}]: best sample at boundary t = {boundary}")]
    NoInteriorMaximum { boundary: f64, horizon: f64 },

    /// A query value fell above the reference curve's ascending branch.
    #[error("value {value} exceeds the reference curve's peak value {max}; no equivalent month exists")]
    AboveRange { value: f64, max: f64 },

    /// A query value fell below the reference curve's ascending branch.
    #[error("value {value} is below the reference curve's value {min} at month 0; no equivalent month exists")]
    BelowRange { value: f64, min: f64 },

    /// An iterative solver ran out of iterations before meeting tolerance.
    #[error("{solver} did not converge within {max_iter} iterations (residual {residual})")]
    Convergence {
        solver: &'static str,
        max_iter: usize,
        residual: f64,
    },

    /// Calibration finished but the residuals are out of tolerance, or the
    /// solved parameters are unusable (non-finite, wrong sign).
    #[error("calibration of {what} failed: {detail}; residuals {residuals:?}")]
    Calibration {
        what: &'static str,
        detail: String,
        residuals: Vec<f64>,
    },

    /// A bracketing search exhausted its expansion budget without enclosing
    /// the target.
    #[error("target {target} not attainable within bracket [{lo}, {hi}] (attained range [{attained_lo}, {attained_hi}])")]
    Bracket {
        target: f64,
        lo: f64,
        hi: f64,
        attained_lo: f64,
        attained_hi: f64,
    },

    /// The depth and complexity curves crossed zero times or more than once.
    #[error("expected exactly one depth/complexity crossing, found {}: {crossings:?}", crossings.len())]
    CrossingCount { crossings: Vec<f64> },

    /// The Eq.-style bracket E − l·N·N′ dipped to a non-positive value.
    #[error("cognition bracket is non-positive at month {month} (value {value}); lower the coupling l")]
    BracketNonPositive { month: f64, value: f64 },

    /// A combinatorics query outside the supported exact range.
    #[error("{what}: {detail}")]
    Domain {
        what: &'static str,
        detail: String,
    },

    /// Sampling request with an empty or inverted range.
    #[error("invalid sampling range: start {start}, end {end}, step {step}")]
    InvalidRange { start: f64, end: f64, step: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
