//! Damage events and the scenarios that compose them.
//!
//! A scenario is a growth curve, an aging law, and an ordered list of
//! insults to the population. Damage acts as a multiplicative factor on the
//! baseline population: a sudden loss scales everything from its onset month
//! on, a sustained loss compounds month by month with a real-valued
//! exponent so trajectories stay step-size independent.

use crate::growth::{neuron_count, GrowthParams};
use crate::weakening::WeakeningMode;
use std::fmt;

/// A single insult to the neuron population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DamageEvent {
    /// Instantaneous fractional loss at `month`: factor (1 - fraction) for
    /// every t >= month.
    SuddenLoss { month: f64, fraction: f64 },
    /// Compounding monthly loss from `start_month` on: factor
    /// (1 - monthly_rate)^(t - start_month).
    SustainedLoss { start_month: f64, monthly_rate: f64 },
}

impl DamageEvent {
    /// Month at which the event begins to act.
    pub fn onset_month(&self) -> f64 {
        match *self {
            DamageEvent::SuddenLoss { month, .. } => month,
            DamageEvent::SustainedLoss { start_month, .. } => start_month,
        }
    }
}

/// The unit of simulation: one growth curve, one aging law, zero or more
/// damage events, and a label for plots and reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub growth: GrowthParams,
    pub mode: WeakeningMode,
    pub events: Vec<DamageEvent>,
    pub label: String,
}

impl Scenario {
    pub fn new(growth: GrowthParams, mode: WeakeningMode, label: impl Into<String>) -> Self {
        Scenario {
            growth,
            mode,
            events: Vec::new(),
            label: label.into(),
        }
    }

    pub fn with_events(mut self, events: Vec<DamageEvent>) -> Self {
        self.events = events;
        self
    }
}

/// One rule breach found by [`validate_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    FractionOutOfRange { index: usize, value: f64 },
    RateOutOfRange { index: usize, value: f64 },
    NegativeOnset { index: usize, month: f64 },
    OnsetBeyondHorizon { index: usize, month: f64, horizon: f64 },
    UnsortedEvents { index: usize },
    MultipleSustainedLoss,
}

impl Violation {
    /// Dotted path of the offending field in the scenario-file schema,
    /// e.g. `events[0].fraction`. Used by diagnostics.
    pub fn field_path(&self) -> String {
        match self {
            Violation::FractionOutOfRange { index, .. } => format!("events[{index}].fraction"),
            Violation::RateOutOfRange { index, .. } => format!("events[{index}].monthly_rate"),
            Violation::NegativeOnset { index, .. } | Violation::OnsetBeyondHorizon { index, .. } => {
                format!("events[{index}]")
            }
            Violation::UnsortedEvents { index } => format!("events[{index}]"),
            Violation::MultipleSustainedLoss => "events".to_string(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FractionOutOfRange { index, value } => {
                write!(f, "events[{index}]: fraction {value} out of (0,1)")
            }
            Violation::RateOutOfRange { index, value } => {
                write!(f, "events[{index}]: monthly_rate {value} out of (0,1)")
            }
            Violation::NegativeOnset { index, month } => {
                write!(f, "events[{index}]: negative onset month {month}")
            }
            Violation::OnsetBeyondHorizon { index, month, horizon } => {
                write!(f, "events[{index}]: onset month {month} beyond horizon {horizon}")
            }
            Violation::UnsortedEvents { index } => {
                write!(f, "events[{index}]: onset earlier than preceding event (events must be sorted)")
            }
            Violation::MultipleSustainedLoss => {
                write!(f, "multiple sustained-loss events (at most one allowed)")
            }
        }
    }
}

/// Checks every scenario invariant and reports all breaches at once.
/// An empty list means the scenario is valid. The input is not mutated.
pub fn validate_scenario(scenario: &Scenario) -> Vec<Violation> {
    let horizon = crate::complexity::DEFAULT_HORIZON;
    let mut violations = Vec::new();
    let mut sustained_seen = false;
    let mut prev_onset = f64::NEG_INFINITY;

    for (index, event) in scenario.events.iter().enumerate() {
        let onset = event.onset_month();
        if onset < 0.0 || !onset.is_finite() {
            violations.push(Violation::NegativeOnset { index, month: onset });
        } else if onset > horizon {
            violations.push(Violation::OnsetBeyondHorizon { index, month: onset, horizon });
        }
        if onset < prev_onset {
            violations.push(Violation::UnsortedEvents { index });
        }
        prev_onset = onset.max(prev_onset);

        match *event {
            DamageEvent::SuddenLoss { fraction, .. } => {
                if !(fraction > 0.0 && fraction < 1.0) {
                    violations.push(Violation::FractionOutOfRange { index, value: fraction });
                }
            }
            DamageEvent::SustainedLoss { monthly_rate, .. } => {
                if !(monthly_rate > 0.0 && monthly_rate < 1.0) {
                    violations.push(Violation::RateOutOfRange { index, value: monthly_rate });
                }
                if sustained_seen {
                    violations.push(Violation::MultipleSustainedLoss);
                }
                sustained_seen = true;
            }
        }
    }
    violations
}

/// Multiplicative factor the events apply to the baseline population at
/// month `t`. Equals 1 before any event; stays in (0, 1].
pub fn damage_factor(t: f64, events: &[DamageEvent]) -> f64 {
    let mut factor = 1.0;
    for event in events {
        match *event {
            DamageEvent::SuddenLoss { month, fraction } => {
                if t >= month {
                    factor *= 1.0 - fraction;
                }
            }
            DamageEvent::SustainedLoss { start_month, monthly_rate } => {
                if t >= start_month {
                    factor *= (1.0 - monthly_rate).powf(t - start_month);
                }
            }
        }
    }
    factor
}

/// Population at month `t` after the scenario's damage is applied.
pub fn effective_neurons(t: f64, scenario: &Scenario) -> f64 {
    neuron_count(t, &scenario.growth) * damage_factor(t, &scenario.events)
}
