//! The five stock scenarios the comparison workflow runs: an undamaged
//! baseline, a one-off 5% loss at month 600, accelerated weakening, the
//! combination of those two, and a sustained 0.05%-per-month loss from
//! month 300.

use crate::growth::GrowthParams;
use crate::scenario::{DamageEvent, Scenario};
use crate::weakening::WeakeningMode;

pub const SUDDEN_LOSS_MONTH: f64 = 600.0;
pub const SUDDEN_LOSS_FRACTION: f64 = 0.05;
pub const SUSTAINED_START_MONTH: f64 = 300.0;
pub const SUSTAINED_MONTHLY_RATE: f64 = 5e-4;

/// Preset names in canonical comparison order.
pub const PRESET_NAMES: [&str; 5] =
    ["baseline", "sudden-loss", "exp-weaken", "combined", "sustained"];

/// Builds one preset scenario from calibrated curve parameters. `weaken_tau`
/// is only consulted by the presets that use the accelerated weakening mode.
/// Returns None for an unknown name.
pub fn preset(name: &str, growth: GrowthParams, h: f64, weaken_tau: f64) -> Option<Scenario> {
    let linear = WeakeningMode::LinearExponent { h };
    let accelerated = WeakeningMode::DoubleExponential { h, tau: weaken_tau };
    let sudden = DamageEvent::SuddenLoss {
        month: SUDDEN_LOSS_MONTH,
        fraction: SUDDEN_LOSS_FRACTION,
    };
    let sustained = DamageEvent::SustainedLoss {
        start_month: SUSTAINED_START_MONTH,
        monthly_rate: SUSTAINED_MONTHLY_RATE,
    };
    let scenario = match name {
        "baseline" => Scenario::new(growth, linear, name),
        "sudden-loss" => Scenario::new(growth, linear, name).with_events(vec![sudden]),
        "exp-weaken" => Scenario::new(growth, accelerated, name),
        "combined" => Scenario::new(growth, accelerated, name).with_events(vec![sudden]),
        "sustained" => Scenario::new(growth, linear, name).with_events(vec![sustained]),
        _ => return None,
    };
    Some(scenario)
}

/// All presets in [`PRESET_NAMES`] order.
pub fn all_presets(growth: GrowthParams, h: f64, weaken_tau: f64) -> Vec<Scenario> {
    PRESET_NAMES
        .iter()
        .map(|name| preset(name, growth, h, weaken_tau).expect("known preset"))
        .collect()
}
