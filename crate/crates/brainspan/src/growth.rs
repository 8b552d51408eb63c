//! Neuron-population growth law.
//!
//! The population follows a Gompertz curve
//!
//! ```text
//! N(t) = n_max * exp(-b * exp(-t / tau_g))
//! ```
//!
//! which rises from `n_max * exp(-b)` at birth toward the `n_max` plateau,
//! strictly increasing the whole way. The shape parameters `b` and `tau_g`
//! are normally produced by the calibration module rather than chosen by
//! hand; `n_max` is a free scale because every downstream comparison is
//! linear in it.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Parameters of the Gompertz population curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    /// Population ceiling, dimensionless count > 0.
    pub n_max: f64,
    /// Gompertz shape parameter, > 0. Larger values push the birth
    /// population further below the ceiling.
    pub b: f64,
    /// Growth time constant in months, > 0.
    pub tau_g: f64,
}

impl GrowthParams {
    /// Validates and builds the parameter set.
    pub fn new(n_max: f64, b: f64, tau_g: f64) -> Result<Self> {
        check_positive("n_max", n_max)?;
        check_positive("b", b)?;
        check_positive("tau_g", tau_g)?;
        Ok(GrowthParams { n_max, b, tau_g })
    }

    /// Same shape, different ceiling. Useful for scale-invariance checks.
    pub fn with_n_max(self, n_max: f64) -> Result<Self> {
        GrowthParams::new(n_max, self.b, self.tau_g)
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            constraint: "must be finite and > 0",
        })
    }
}

/// Population at month `t`.
pub fn neuron_count(t: f64, growth: &GrowthParams) -> f64 {
    growth.n_max * (-growth.b * (-t / growth.tau_g).exp()).exp()
}

/// Analytic time derivative of [`neuron_count`], in neurons/month.
///
/// d/dt [n_max e^{-b e^{-t/tau}}] = N(t) * (b/tau) * e^{-t/tau}, strictly
/// positive for finite `t` and vanishing on the plateau.
pub fn neuron_count_derivative(t: f64, growth: &GrowthParams) -> f64 {
    neuron_count(t, growth) * (growth.b / growth.tau_g) * (-t / growth.tau_g).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> GrowthParams {
        GrowthParams::new(1000.0, 5.0, 60.0).unwrap()
    }

    #[test]
    fn rejects_non_positive_parameters() {
        assert!(GrowthParams::new(0.0, 5.0, 60.0).is_err());
        assert!(GrowthParams::new(1000.0, -1.0, 60.0).is_err());
        assert!(GrowthParams::new(1000.0, 5.0, 0.0).is_err());
        assert!(GrowthParams::new(f64::NAN, 5.0, 60.0).is_err());
        assert!(GrowthParams::new(1000.0, f64::INFINITY, 60.0).is_err());
    }

    #[test]
    fn birth_population() {
        // 1000 * e^-5, evaluated independently.
        let n0 = neuron_count(0.0, &reference());
        assert!((n0 - 6.737946999).abs() < 1e-8, "n0 = {n0}");
    }

    #[test]
    fn plateau_at_large_t() {
        let g = reference();
        assert!((neuron_count(1e9, &g) - g.n_max).abs() < 1e-9);
        assert!(neuron_count_derivative(1e9, &g).abs() < 1e-12);
    }

    #[test]
    fn inflection_point_value_and_slope() {
        // At t = tau_g * ln(b) the exponent is exactly -1, so N = n_max/e
        // and the slope collapses to N/tau_g.
        let g = reference();
        let t = g.tau_g * g.b.ln();
        let n = neuron_count(t, &g);
        let d = neuron_count_derivative(t, &g);
        assert!((n - 367.879441171).abs() < 1e-8, "n = {n}");
        assert!((d - 6.131324020).abs() < 1e-8, "d = {d}");
    }

    #[test]
    fn strictly_increasing_and_bounded() {
        let g = reference();
        let mut prev = neuron_count(0.0, &g);
        for i in 1..=1200 {
            let n = neuron_count(i as f64, &g);
            assert!(n > prev, "not increasing at month {i}");
            assert!(n <= g.n_max, "exceeds ceiling at month {i}");
            prev = n;
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        // 100 samples across the growth phase. Deep into the plateau the
        // true slope underflows toward zero and a 1e-4 central difference
        // is pure rounding noise, so the comparison stays where the
        // difference quotient is well conditioned.
        let g = reference();
        let step = 1e-4;
        for i in 0..100 {
            let t = 6.0 * i as f64;
            let analytic = neuron_count_derivative(t, &g);
            let numeric = if t < step {
                (neuron_count(t + step, &g) - neuron_count(t, &g)) / step
            } else {
                (neuron_count(t + step, &g) - neuron_count(t - step, &g)) / (2.0 * step)
            };
            let rel = (analytic - numeric).abs() / numeric.abs().max(f64::MIN_POSITIVE);
            assert!(rel < 1e-4, "t = {t}: analytic {analytic}, numeric {numeric}");
        }
    }
}
