//! The complexity curve in log₂ domain, and trajectory sampling.
//!
//! The raw state count 2^N(t) overflows any float for realistic populations,
//! so every value here is log₂(states): the effective population times the
//! per-neuron log₂ base. All position comparisons (peak month, crossings,
//! equivalent ages) are preserved because log₂ is strictly increasing.

use crate::cognition::{cognitive_depth, CognitionParams};
use crate::error::{Error, Result};
use crate::scenario::{effective_neurons, Scenario};
use crate::weakening::base_log2;

/// Default simulation horizon in months (covers every claim the model makes).
pub const DEFAULT_HORIZON: f64 = 1200.0;

/// log₂ of the scenario's state count at month `t`.
pub fn log2_complexity(t: f64, scenario: &Scenario) -> f64 {
    effective_neurons(t, scenario) * base_log2(t, &scenario.mode)
}

/// A sampled curve: months plus the log₂-complexity series, optionally with
/// a cognitive-depth series on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub months: Vec<f64>,
    pub log2_complexity: Vec<f64>,
    pub cognitive_depth: Option<Vec<f64>>,
    pub scenario_label: String,
}

impl Trajectory {
    /// Builds a trajectory, upholding the grid invariants: strictly
    /// increasing sample times and equal-length series.
    pub fn new(
        months: Vec<f64>,
        log2_complexity: Vec<f64>,
        cognitive_depth: Option<Vec<f64>>,
        scenario_label: impl Into<String>,
    ) -> Self {
        assert_eq!(months.len(), log2_complexity.len(), "series length mismatch");
        if let Some(depth) = &cognitive_depth {
            assert_eq!(months.len(), depth.len(), "depth series length mismatch");
        }
        assert!(
            months.windows(2).all(|w| w[0] < w[1]),
            "sample times must be strictly increasing"
        );
        Trajectory {
            months,
            log2_complexity,
            cognitive_depth,
            scenario_label: scenario_label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.months.len()
    }

    pub fn is_empty(&self) -> bool {
        self.months.is_empty()
    }
}

/// The sampling grid: `t_start, t_start+step, ...` with `t_end` always
/// included as the final sample.
fn sample_grid(t_start: f64, t_end: f64, step: f64) -> Result<Vec<f64>> {
    if !(t_start.is_finite() && t_end.is_finite() && step.is_finite())
        || t_start >= t_end
        || step <= 0.0
    {
        return Err(Error::InvalidRange { start: t_start, end: t_end, step });
    }
    // i*step instead of repeated addition keeps the grid free of
    // accumulated rounding drift.
    let span = t_end - t_start;
    let full_steps = (span / step + 1e-9).floor() as usize;
    let mut months = Vec::with_capacity(full_steps + 2);
    for i in 0..=full_steps {
        months.push(t_start + i as f64 * step);
    }
    let last = *months.last().expect("grid has at least t_start");
    if last < t_end - step * 1e-9 {
        months.push(t_end);
    } else {
        // Final full step lands on t_end up to rounding noise; snap it.
        *months.last_mut().expect("non-empty") = t_end;
    }
    Ok(months)
}

/// Samples the scenario's complexity curve over `[t_start, t_end]`.
pub fn simulate(scenario: &Scenario, t_start: f64, t_end: f64, step: f64) -> Result<Trajectory> {
    let months = sample_grid(t_start, t_end, step)?;
    let series: Vec<f64> = months.iter().map(|&t| log2_complexity(t, scenario)).collect();
    Ok(Trajectory::new(months, series, None, scenario.label.clone()))
}

/// Samples complexity and clipped cognitive depth on one grid.
pub fn simulate_with_depth(
    scenario: &Scenario,
    params: &CognitionParams,
    t_start: f64,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    let months = sample_grid(t_start, t_end, step)?;
    let series: Vec<f64> = months.iter().map(|&t| log2_complexity(t, scenario)).collect();
    let depth: Vec<f64> = months.iter().map(|&t| cognitive_depth(t, params, scenario)).collect();
    Ok(Trajectory::new(months, series, Some(depth), scenario.label.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{neuron_count, GrowthParams};
    use crate::scenario::DamageEvent;
    use crate::weakening::{WeakeningMode, DEFAULT_WEAKENING_RATE};

    fn scenario_with(events: Vec<DamageEvent>) -> Scenario {
        let growth = GrowthParams::new(1.0e6, 0.08, 61.0).unwrap();
        let mode = WeakeningMode::linear(DEFAULT_WEAKENING_RATE).unwrap();
        Scenario::new(growth, mode, "test").with_events(events)
    }

    #[test]
    fn value_at_birth_is_plain_population() {
        // base_log2(0) = 1, so the complexity at t=0 equals N(0).
        let s = scenario_with(vec![]);
        let v = log2_complexity(0.0, &s);
        assert_eq!(v, neuron_count(0.0, &s.growth));
    }

    #[test]
    fn linear_in_population_scale() {
        let s = scenario_with(vec![]);
        let mut scaled = s.clone();
        scaled.growth = s.growth.with_n_max(2.0 * s.growth.n_max).unwrap();
        for t in [0.0, 138.0, 300.0, 1000.0] {
            let v = log2_complexity(t, &s);
            let w = log2_complexity(t, &scaled);
            assert!((w - 2.0 * v).abs() < 1e-9 * w.abs(), "t={t}: {w} vs 2*{v}");
        }
    }

    #[test]
    fn near_constant_population_with_frozen_base_matches_enumeration() {
        // With b vanishingly small the population sits at n_max for all t,
        // and h=0 freezes the base at 2; the complexity must then equal
        // log2 of the exact enumeration total 2^12 at every month.
        let growth = GrowthParams::new(12.0, 1e-15, 60.0).unwrap();
        let mode = WeakeningMode::linear(0.0).unwrap();
        let s = Scenario::new(growth, mode, "constant");
        let enumerated = crate::states::enumerate_states(12).unwrap();
        let expected = (enumerated.total() as f64).log2();
        for t in [0.0, 77.0, 600.0, 1200.0] {
            let v = log2_complexity(t, &s);
            assert!((v - expected).abs() < 1e-9, "t={t}: {v} vs {expected}");
        }
    }

    #[test]
    fn grid_includes_endpoint() {
        let s = scenario_with(vec![]);
        let t = simulate(&s, 0.0, 10.0, 5.0).unwrap();
        assert_eq!(t.months, vec![0.0, 5.0, 10.0]);
        let t = simulate(&s, 0.0, 10.0, 4.0).unwrap();
        assert_eq!(t.months, vec![0.0, 4.0, 8.0, 10.0]);
    }

    #[test]
    fn default_horizon_grid_has_1201_samples() {
        let s = scenario_with(vec![]);
        let t = simulate(&s, 0.0, DEFAULT_HORIZON, 1.0).unwrap();
        assert_eq!(t.len(), 1201);
        assert_eq!(*t.months.last().unwrap(), 1200.0);
    }

    #[test]
    fn invalid_ranges_are_usage_errors() {
        let s = scenario_with(vec![]);
        assert!(matches!(simulate(&s, 10.0, 0.0, 1.0), Err(Error::InvalidRange { .. })));
        assert!(matches!(simulate(&s, 0.0, 10.0, 0.0), Err(Error::InvalidRange { .. })));
        assert!(matches!(simulate(&s, 0.0, 10.0, -1.0), Err(Error::InvalidRange { .. })));
        assert!(matches!(simulate(&s, 0.0, 0.0, 1.0), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn events_only_change_samples_from_onset() {
        let clean = scenario_with(vec![]);
        let damaged = scenario_with(vec![DamageEvent::SuddenLoss { month: 600.0, fraction: 0.05 }]);
        let a = simulate(&clean, 0.0, 1200.0, 1.0).unwrap();
        let b = simulate(&damaged, 0.0, 1200.0, 1.0).unwrap();
        for i in 0..a.len() {
            if a.months[i] < 600.0 {
                assert_eq!(a.log2_complexity[i], b.log2_complexity[i], "month {}", a.months[i]);
            } else {
                assert!(b.log2_complexity[i] < a.log2_complexity[i], "month {}", a.months[i]);
            }
        }
    }

    #[test]
    #[should_panic(expected = "strictly increasing")]
    fn trajectory_rejects_unsorted_grid() {
        Trajectory::new(vec![0.0, 2.0, 1.0], vec![1.0, 2.0, 3.0], None, "bad");
    }
}
