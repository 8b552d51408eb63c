//! Cognitive depth: an exponentially accumulating knowledge curve scaled by
//! a population-coupling bracket, clipped from above by the complexity
//! curve.
//!
//! ```text
//! D_raw(t) = k * K(t) * (e - l * N(t) * N'(t))      K(t) = k0 * exp(lambda t)
//! D(t)     = min(D_raw(t), C(t))
//! ```
//!
//! Depth shares the complexity curve's log₂-states scale — the clip is a
//! plain `min`, which is only meaningful if both sides carry the same units;
//! the scale factor `k` absorbs the conversion. The knowledge curve is
//! pluggable in principle; the exponential form is the default and the only
//! one shipped.

use crate::complexity::{log2_complexity, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::growth::{neuron_count, neuron_count_derivative, GrowthParams};
use crate::scenario::Scenario;

/// Parameters of the depth curve. `k` and `lambda` normally come out of
/// calibration; `e`, `l`, and `k0` have module defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CognitionParams {
    /// Overall scale, > 0; carries the unit conversion onto the log₂-states axis.
    pub k: f64,
    /// Energy-like constant inside the bracket, > 0. Default 1.
    pub e: f64,
    /// Coupling of the population term, >= 0. Defaulted via [`default_coupling`].
    pub l: f64,
    /// Knowledge growth rate per month, > 0.
    pub lambda: f64,
    /// Initial knowledge level, > 0. Default 1.
    pub k0: f64,
}

/// Margin kept between the coupling default and the bracket-positivity
/// boundary: l = (1 - BRACKET_MARGIN) / max_t N·N′ keeps the bracket above
/// BRACKET_MARGIN * e everywhere.
pub const BRACKET_MARGIN: f64 = 0.5;

impl CognitionParams {
    /// Validates the fields and checks bracket positivity against `growth`
    /// on a 1-month grid over the default horizon.
    pub fn new(k: f64, e: f64, l: f64, lambda: f64, k0: f64, growth: &GrowthParams) -> Result<Self> {
        for (name, value, allow_zero) in [
            ("k", k, false),
            ("e", e, false),
            ("l", l, true),
            ("lambda", lambda, false),
            ("k0", k0, false),
        ] {
            let ok = value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0));
            if !ok {
                return Err(Error::Parameter {
                    name,
                    value,
                    constraint: if allow_zero {
                        "must be finite and >= 0"
                    } else {
                        "must be finite and > 0"
                    },
                });
            }
        }
        let params = CognitionParams { k, e, l, lambda, k0 };
        params.check_bracket(growth)?;
        Ok(params)
    }

    /// Reports the earliest month (1-month grid) where the bracket
    /// e − l·N·N′ fails to stay positive.
    fn check_bracket(&self, growth: &GrowthParams) -> Result<()> {
        let mut t = 0.0;
        while t <= DEFAULT_HORIZON {
            let value = self.bracket(t, growth);
            if value <= 0.0 {
                return Err(Error::BracketNonPositive { month: t, value });
            }
            t += 1.0;
        }
        Ok(())
    }

    fn bracket(&self, t: f64, growth: &GrowthParams) -> f64 {
        self.e - self.l * neuron_count(t, growth) * neuron_count_derivative(t, growth)
    }
}

/// Default coupling for a given growth curve: (1 − [`BRACKET_MARGIN`]) / max N·N′,
/// so the bracket never dips below BRACKET_MARGIN when e = 1.
pub fn default_coupling(growth: &GrowthParams) -> f64 {
    let mut max_product = 0.0f64;
    let mut t = 0.0;
    while t <= DEFAULT_HORIZON {
        let p = neuron_count(t, growth) * neuron_count_derivative(t, growth);
        max_product = max_product.max(p);
        t += 1.0;
    }
    (1.0 - BRACKET_MARGIN) / max_product
}

/// Accumulated knowledge K(t) = k0 * e^(lambda t); strictly increasing.
pub fn knowledge(t: f64, params: &CognitionParams) -> f64 {
    params.k0 * (params.lambda * t).exp()
}

/// Unclipped depth on the log₂-states scale.
pub fn cognitive_depth_raw(t: f64, params: &CognitionParams, growth: &GrowthParams) -> f64 {
    params.k * knowledge(t, params) * params.bracket(t, growth)
}

/// Depth with the capacity clip applied: min(D_raw, C) at month `t`.
pub fn cognitive_depth(t: f64, params: &CognitionParams, scenario: &Scenario) -> f64 {
    cognitive_depth_raw(t, params, &scenario.growth).min(log2_complexity(t, scenario))
}
