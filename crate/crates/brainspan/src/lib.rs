//! Deterministic simulator and calibration toolkit for lifespan
//! neural-complexity curves.
//!
//! The model: a saturating population curve for effective neuron count, a
//! per-neuron binary state space whose size is tracked in the log2 domain,
//! a time-dependent weakening factor on the per-neuron exponent, optional
//! damage events (one-off or sustained fractional losses), and an
//! exponential knowledge curve whose product with a population term gives
//! a cognitive-depth curve clipped by complexity itself.
//!
//! Everything is pure f64 computation with explicit parameters; given the
//! same inputs, every function, file, and figure is bit-reproducible.
//!
//! Module map:
//! - [`growth`]: population curve and its derivative
//! - [`weakening`]: per-neuron exponent decay modes
//! - [`scenario`]: damage events, validation, effective population
//! - [`complexity`]: the log2-domain complexity functional and sampling
//! - [`states`]: exact firing-pattern counts for small populations
//! - [`cognition`]: knowledge and depth curves
//! - [`calibrate`]: solvers pinning parameters to curve-geometry anchors
//! - [`config`], [`output`], [`report`], [`presets`], [`cli`]: file formats
//!   and the command-line front end

pub mod calibrate;
pub mod cli;
pub mod cognition;
pub mod complexity;
pub mod config;
pub mod error;
pub mod growth;
pub mod output;
pub mod presets;
pub mod report;
pub mod scenario;
pub mod states;
pub mod weakening;

pub use calibrate::{
    calibrate_cognition, calibrate_growth, calibrate_weakening_tau, equivalent_age,
    find_intersection, find_peak, full_calibration, CalibrationTargets, EquivAnchor,
    RootFindConfig,
};
pub use cognition::{cognitive_depth, cognitive_depth_raw, knowledge, CognitionParams};
pub use complexity::{log2_complexity, simulate, simulate_with_depth, Trajectory, DEFAULT_HORIZON};
pub use error::{Error, Result};
pub use growth::{neuron_count, neuron_count_derivative, GrowthParams};
pub use scenario::{damage_factor, effective_neurons, validate_scenario, DamageEvent, Scenario};
pub use states::{enumerate_states, states_with_n_firing, total_states, StateHistogram};
pub use weakening::{base_log2, WeakeningMode, DEFAULT_WEAKENING_RATE};
