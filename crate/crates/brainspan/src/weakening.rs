//! Per-neuron aging laws.
//!
//! Each neuron contributes a time-dependent base to the state count. At
//! birth the base is exactly 2 (a neuron either fires or it doesn't); with
//! age, the base decays below 2 under one of two laws, expressed here
//! directly in log₂ form:
//!
//! * linear exponent: `log2(2 e^{-ht}) = 1 - h t log2(e)`
//! * double exponential: `log2(2 e^{-h(e^{t/tau}-1)}) = 1 - h (e^{t/tau} - 1) log2(e)`
//!
//! Both start at 1 and are non-increasing. The double-exponential law is the
//! accelerated-weakening variant; its time constant `tau` is a calibrated
//! free parameter.

use crate::error::{Error, Result};

/// Default monthly weakening rate shared by both laws.
pub const DEFAULT_WEAKENING_RATE: f64 = 0.0001 / 15.0;

/// Which aging law applies, with its rate constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeakeningMode {
    /// Exponent decays linearly in t: per-neuron base 2e^{-ht}.
    LinearExponent { h: f64 },
    /// Exponent decays exponentially in t: per-neuron base 2exp[-h(e^{t/tau} - 1)].
    DoubleExponential { h: f64, tau: f64 },
}

impl WeakeningMode {
    pub fn linear(h: f64) -> Result<Self> {
        check_rate(h)?;
        Ok(WeakeningMode::LinearExponent { h })
    }

    pub fn double_exponential(h: f64, tau: f64) -> Result<Self> {
        check_rate(h)?;
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::Parameter {
                name: "tau",
                value: tau,
                constraint: "must be finite and > 0",
            });
        }
        Ok(WeakeningMode::DoubleExponential { h, tau })
    }

    pub fn h(&self) -> f64 {
        match *self {
            WeakeningMode::LinearExponent { h } => h,
            WeakeningMode::DoubleExponential { h, .. } => h,
        }
    }
}

fn check_rate(h: f64) -> Result<()> {
    if h.is_finite() && h >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "h",
            value: h,
            constraint: "must be finite and >= 0",
        })
    }
}

/// log₂ of the per-neuron base at month `t`.
///
/// The base itself always lies in (0, 2], so the returned log may go
/// negative at large `t` (a base below 1) but never hits -∞ for finite
/// inputs.
pub fn base_log2(t: f64, mode: &WeakeningMode) -> f64 {
    match *mode {
        WeakeningMode::LinearExponent { h } => 1.0 - h * t * std::f64::consts::LOG2_E,
        WeakeningMode::DoubleExponential { h, tau } => {
            1.0 - h * ((t / tau).exp() - 1.0) * std::f64::consts::LOG2_E
        }
    }
}
