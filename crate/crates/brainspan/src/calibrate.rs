//! Fitting the model's free parameters to the target curve geometry, plus
//! the inverse queries (peak month, equivalent age, curve intersection)
//! used everywhere else.
//!
//! The fit works on two anchor kinds: the complexity peak month, and
//! equivalent-age pairs (the month on the baseline's ascending branch whose
//! complexity matches a scenario's value at a query month). Growth shape
//! (b, tau_g) is solved against {peak, baseline equivalent age} by damped
//! Newton with a finite-difference Jacobian, falling back to nested
//! bisection; the accelerated-weakening time constant and the depth-curve
//! pair (k, lambda) each reduce to one-dimensional or closed-form solves.

use crate::cognition::{cognitive_depth_raw, default_coupling, CognitionParams};
use crate::complexity::{log2_complexity, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::growth::GrowthParams;
use crate::scenario::Scenario;
use crate::weakening::WeakeningMode;
use serde::{Deserialize, Serialize};

/// Newborn depth as a fraction of newborn complexity: the second condition
/// closing the (k, lambda) system alongside the intersection anchor.
/// Arbitrary but explicit; tune here if a different newborn floor is wanted.
pub const NEWBORN_DEPTH_FRACTION: f64 = 0.05;

/// Population ceiling used during calibration. A free scale: every anchor
/// is a position on the time axis, and positions are invariant to n_max
/// because the log-domain curve is linear in it.
pub const CALIBRATION_N_MAX: f64 = 1.0e6;

/// An equivalent-age anchor: at `query_month` the curve under study matches
/// the baseline's level of `equivalent_month`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivAnchor {
    pub query_month: f64,
    pub equivalent_month: f64,
}

/// The full anchor set the calibrators consume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTargets {
    /// Month of the baseline complexity maximum.
    pub peak_month: f64,
    /// Baseline self-anchor: late-life complexity equals this earlier month's level.
    pub baseline_equiv: EquivAnchor,
    /// Same query under accelerated weakening; fixes the weakening time constant.
    pub exp_weaken_equiv: EquivAnchor,
    /// Month where the depth curve meets the complexity curve.
    pub intersection_month: f64,
}

impl Default for CalibrationTargets {
    fn default() -> Self {
        CalibrationTargets {
            peak_month: 300.0,
            baseline_equiv: EquivAnchor { query_month: 1000.0, equivalent_month: 138.0 },
            exp_weaken_equiv: EquivAnchor { query_month: 1000.0, equivalent_month: 97.0 },
            intersection_month: 600.0,
        }
    }
}

impl CalibrationTargets {
    /// Equivalent months must sit on the ascending branch (before the peak)
    /// and every month must lie within the horizon.
    pub fn validate(&self) -> Result<()> {
        let months = [
            ("peak_month", self.peak_month),
            ("baseline_equiv.query_month", self.baseline_equiv.query_month),
            ("baseline_equiv.equivalent_month", self.baseline_equiv.equivalent_month),
            ("exp_weaken_equiv.query_month", self.exp_weaken_equiv.query_month),
            ("exp_weaken_equiv.equivalent_month", self.exp_weaken_equiv.equivalent_month),
            ("intersection_month", self.intersection_month),
        ];
        for (name, value) in months {
            if !(value.is_finite() && (0.0..=DEFAULT_HORIZON).contains(&value)) {
                return Err(Error::Parameter {
                    name,
                    value,
                    constraint: "must lie within the simulation horizon",
                });
            }
        }
        for (name, value) in [
            ("baseline_equiv.equivalent_month", self.baseline_equiv.equivalent_month),
            ("exp_weaken_equiv.equivalent_month", self.exp_weaken_equiv.equivalent_month),
        ] {
            if value >= self.peak_month {
                return Err(Error::Parameter {
                    name,
                    value,
                    constraint: "equivalent months must precede the peak (ascending branch)",
                });
            }
        }
        Ok(())
    }
}

/// Shared knobs for the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFindConfig {
    /// Absolute tolerance on returned months.
    pub abs_tol: f64,
    /// Iteration budget per solve.
    pub max_iter: usize,
    /// Geometric factor for bracket growth.
    pub bracket_expansion: f64,
}

impl Default for RootFindConfig {
    fn default() -> Self {
        RootFindConfig { abs_tol: 1e-3, max_iter: 200, bracket_expansion: 1.6 }
    }
}

impl RootFindConfig {
    fn check(&self) -> Result<()> {
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0) {
            return Err(Error::Parameter {
                name: "abs_tol",
                value: self.abs_tol,
                constraint: "must be finite and > 0",
            });
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter {
                name: "max_iter",
                value: 0.0,
                constraint: "must be >= 1",
            });
        }
        if !(self.bracket_expansion.is_finite() && self.bracket_expansion > 1.0) {
            return Err(Error::Parameter {
                name: "bracket_expansion",
                value: self.bracket_expansion,
                constraint: "must be finite and > 1",
            });
        }
        Ok(())
    }

    /// Tightened copy for inner evaluations feeding a finite-difference
    /// Jacobian, so discretization noise stays well under the residual goal.
    fn inner(&self) -> RootFindConfig {
        RootFindConfig { abs_tol: (self.abs_tol * 0.01).max(1e-9), ..*self }
    }
}

const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;
const GOLDEN_STEP: f64 = 2.0 - GOLDEN_RATIO;

/// Maximum of a unimodal function on [lo, hi] by golden-section search.
/// Returns (argmax, evaluations).
fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, usize) {
    let mut x1 = lo + GOLDEN_STEP * (hi - lo);
    let mut x2 = hi - GOLDEN_STEP * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = hi - GOLDEN_STEP * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + GOLDEN_STEP * (hi - lo);
            f1 = f(x1);
        }
        evals += 1;
    }
    (0.5 * (lo + hi), evals)
}

/// Month of the scenario's complexity maximum, to `cfg.abs_tol`.
///
/// A coarse 1-month scan brackets the maximum, then golden-section search
/// refines it. A maximum sitting on the scan boundary means the curve is
/// monotone over the horizon and has no interior peak to report.
pub fn find_peak(scenario: &Scenario, cfg: &RootFindConfig) -> Result<f64> {
    find_peak_with_scan_step(scenario, 1.0, cfg)
}

/// [`find_peak`] with an explicit coarse-scan step. The result is
/// step-independent for any step fine enough to straddle the peak (the
/// curve is unimodal around it); exposed for exactly that property check.
pub fn find_peak_with_scan_step(
    scenario: &Scenario,
    scan_step: f64,
    cfg: &RootFindConfig,
) -> Result<f64> {
    cfg.check()?;
    if !(scan_step.is_finite() && scan_step > 0.0) {
        return Err(Error::Parameter {
            name: "scan_step",
            value: scan_step,
            constraint: "must be finite and > 0",
        });
    }
    let f = |t: f64| log2_complexity(t, scenario);
    let steps = (DEFAULT_HORIZON / scan_step).ceil() as usize;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    let mut grid = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = (i as f64 * scan_step).min(DEFAULT_HORIZON);
        let v = f(t);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
        grid.push(t);
    }
    if best_i == 0 || best_i == grid.len() - 1 {
        return Err(Error::NoInteriorMaximum {
            boundary: grid[best_i],
            horizon: DEFAULT_HORIZON,
        });
    }
    let lo = grid[best_i - 1];
    let hi = grid[best_i + 1];
    let (peak, evals) = golden_section_max(f, lo, hi, cfg.abs_tol);
    if evals > cfg.max_iter {
        return Err(Error::Convergence {
            solver: "find_peak golden section",
            max_iter: cfg.max_iter,
            residual: hi - lo,
        });
    }
    Ok(peak)
}

/// The baseline's invertible segment: [0, peak] with the values at both ends.
struct AscendingBranch {
    peak_month: f64,
    value_at_zero: f64,
    value_at_peak: f64,
}

fn ascending_branch(baseline: &Scenario, cfg: &RootFindConfig) -> Result<AscendingBranch> {
    let peak_month = find_peak(baseline, cfg)?;
    Ok(AscendingBranch {
        peak_month,
        value_at_zero: log2_complexity(0.0, baseline),
        value_at_peak: log2_complexity(peak_month, baseline),
    })
}

/// Inverts the baseline on its ascending branch by bisection.
fn invert_on_branch(
    baseline: &Scenario,
    branch: &AscendingBranch,
    value: f64,
    cfg: &RootFindConfig,
) -> Result<f64> {
    // Strictness slack: a value that matches an endpoint up to float noise
    // is inside the branch, not out of range.
    let slack = 1e-12 * branch.value_at_peak.abs().max(branch.value_at_zero.abs());
    if value > branch.value_at_peak + slack {
        return Err(Error::AboveRange { value, max: branch.value_at_peak });
    }
    if value < branch.value_at_zero - slack {
        return Err(Error::BelowRange { value, min: branch.value_at_zero });
    }
    let target = value.clamp(
        branch.value_at_zero.min(branch.value_at_peak),
        branch.value_at_zero.max(branch.value_at_peak),
    );
    let (mut lo, mut hi) = (0.0, branch.peak_month);
    let mut iterations = 0;
    while hi - lo > cfg.abs_tol {
        if iterations >= cfg.max_iter {
            return Err(Error::Convergence {
                solver: "equivalent-age bisection",
                max_iter: cfg.max_iter,
                residual: hi - lo,
            });
        }
        let mid = 0.5 * (lo + hi);
        if log2_complexity(mid, baseline) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(0.5 * (lo + hi))
}

/// The month on the baseline's ascending branch whose complexity equals the
/// scenario's complexity at `query_month`.
pub fn equivalent_age(
    scenario: &Scenario,
    query_month: f64,
    baseline: &Scenario,
    cfg: &RootFindConfig,
) -> Result<f64> {
    cfg.check()?;
    let value = log2_complexity(query_month, scenario);
    let branch = ascending_branch(baseline, cfg)?;
    invert_on_branch(baseline, &branch, value, cfg)
}

/// Result of the growth fit together with solver diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct GrowthFit {
    pub growth: GrowthParams,
    /// Residuals in months at the returned params: (peak, equivalent age).
    pub residuals: (f64, f64),
    pub iterations: usize,
}

/// Fits (b, tau_g) so the baseline peaks at `targets.peak_month` and its
/// `baseline_equiv` anchor holds, with the ceiling fixed at
/// [`CALIBRATION_N_MAX`].
pub fn calibrate_growth(
    targets: &CalibrationTargets,
    h: f64,
    cfg: &RootFindConfig,
) -> Result<GrowthParams> {
    Ok(calibrate_growth_scaled(targets, h, CALIBRATION_N_MAX, cfg)?.growth)
}

/// [`calibrate_growth`] with an explicit population ceiling; the fitted
/// shape is ceiling-invariant, which the property tests assert.
pub fn calibrate_growth_scaled(
    targets: &CalibrationTargets,
    h: f64,
    n_max: f64,
    cfg: &RootFindConfig,
) -> Result<GrowthFit> {
    cfg.check()?;
    targets.validate()?;
    let mode = WeakeningMode::linear(h)?;
    let inner = cfg.inner();
    let residual_goal = 0.4 * cfg.abs_tol;

    let residuals = |b: f64, tau_g: f64| -> Option<(f64, f64)> {
        let growth = GrowthParams::new(n_max, b, tau_g).ok()?;
        let baseline = Scenario::new(growth, mode, "fit");
        let peak = find_peak(&baseline, &inner).ok()?;
        let value = log2_complexity(targets.baseline_equiv.query_month, &baseline);
        let branch = AscendingBranch {
            peak_month: peak,
            value_at_zero: log2_complexity(0.0, &baseline),
            value_at_peak: log2_complexity(peak, &baseline),
        };
        let equiv = invert_on_branch(&baseline, &branch, value, &inner).ok()?;
        Some((
            peak - targets.peak_month,
            equiv - targets.baseline_equiv.equivalent_month,
        ))
    };

    // Starting point: tau from a mid-range guess, b from the peak first-order
    // condition (b/tau)·e^{-peak/tau}·(1 - c·peak) = c with c = h·log2(e).
    let c = h * std::f64::consts::LOG2_E;
    let peak_b = |tau: f64| c / (1.0 - c * targets.peak_month) * tau * (targets.peak_month / tau).exp();
    let mut tau = 60.0;
    let mut b = peak_b(tau);
    let mut iterations = 0usize;

    if let Some(mut r) = residuals(b, tau) {
        // Damped Newton on the 2-residual system.
        for _ in 0..cfg.max_iter {
            iterations += 1;
            if r.0.abs() < residual_goal && r.1.abs() < residual_goal {
                let growth = GrowthParams::new(n_max, b, tau)?;
                return Ok(GrowthFit { growth, residuals: r, iterations });
            }
            let db = b * 1e-4;
            let dtau = tau * 1e-4;
            let (Some(rb), Some(rt)) = (residuals(b + db, tau), residuals(b, tau + dtau)) else {
                break;
            };
            let j = [
                [(rb.0 - r.0) / db, (rt.0 - r.0) / dtau],
                [(rb.1 - r.1) / db, (rt.1 - r.1) / dtau],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() < 1e-30 {
                break;
            }
            let step_b = (r.0 * j[1][1] - r.1 * j[0][1]) / det;
            let step_tau = (r.1 * j[0][0] - r.0 * j[1][0]) / det;
            let norm = |(a, bb): (f64, f64)| a.abs().max(bb.abs());
            let mut alpha = 1.0;
            let mut advanced = false;
            while alpha > 1e-4 {
                let (b_new, tau_new) = (b - alpha * step_b, tau - alpha * step_tau);
                if b_new > 0.0 && tau_new > 0.0 {
                    if let Some(r_new) = residuals(b_new, tau_new) {
                        if norm(r_new) < norm(r) {
                            b = b_new;
                            tau = tau_new;
                            r = r_new;
                            advanced = true;
                            break;
                        }
                    }
                }
                alpha *= 0.5;
            }
            if !advanced {
                break;
            }
        }
        if r.0.abs() < residual_goal && r.1.abs() < residual_goal {
            let growth = GrowthParams::new(n_max, b, tau)?;
            return Ok(GrowthFit { growth, residuals: r, iterations });
        }
    }

    nested_bisection_growth_fit(targets, h, n_max, cfg, iterations)
}

/// Nested-bisection fallback for the growth fit. The inner solve pins b to
/// the peak anchor for a given tau (the peak month grows with b); the outer
/// solve walks tau against the equivalent-age anchor (which shrinks as tau
/// grows).
fn nested_bisection_growth_fit(
    targets: &CalibrationTargets,
    h: f64,
    n_max: f64,
    cfg: &RootFindConfig,
    iterations_so_far: usize,
) -> Result<GrowthFit> {
    let mode = WeakeningMode::linear(h)?;
    let inner = cfg.inner();
    let residual_goal = 0.4 * cfg.abs_tol;
    let c = h * std::f64::consts::LOG2_E;
    let peak_b = |tau: f64| c / (1.0 - c * targets.peak_month) * tau * (targets.peak_month / tau).exp();

    let residuals = |b: f64, tau_g: f64| -> Option<(f64, f64)> {
        let growth = GrowthParams::new(n_max, b, tau_g).ok()?;
        let baseline = Scenario::new(growth, mode, "fit");
        let peak = find_peak(&baseline, &inner).ok()?;
        let value = log2_complexity(targets.baseline_equiv.query_month, &baseline);
        let branch = AscendingBranch {
            peak_month: peak,
            value_at_zero: log2_complexity(0.0, &baseline),
            value_at_peak: log2_complexity(peak, &baseline),
        };
        let equiv = invert_on_branch(&baseline, &branch, value, &inner).ok()?;
        Some((
            peak - targets.peak_month,
            equiv - targets.baseline_equiv.equivalent_month,
        ))
    };

    let solve_b = |tau: f64, iterations: &mut usize| -> Result<f64> {
        let peak_of = |b: f64| -> Option<f64> {
            let growth = GrowthParams::new(n_max, b, tau).ok()?;
            find_peak(&Scenario::new(growth, mode, "fit"), &inner).ok()
        };
        let guess = peak_b(tau);
        let mut lo = guess;
        let mut hi = guess;
        let mut expansions = 0;
        while peak_of(lo).map_or(false, |p| p > targets.peak_month) {
            lo /= cfg.bracket_expansion;
            expansions += 1;
            if expansions > cfg.max_iter {
                return Err(Error::Convergence {
                    solver: "growth-fit b bracket",
                    max_iter: cfg.max_iter,
                    residual: lo,
                });
            }
        }
        while peak_of(hi).map_or(true, |p| p < targets.peak_month) {
            hi *= cfg.bracket_expansion;
            expansions += 1;
            if expansions > cfg.max_iter {
                return Err(Error::Convergence {
                    solver: "growth-fit b bracket",
                    max_iter: cfg.max_iter,
                    residual: hi,
                });
            }
        }
        for _ in 0..cfg.max_iter {
            *iterations += 1;
            let mid = (lo * hi).sqrt();
            match peak_of(mid) {
                Some(p) if (p - targets.peak_month).abs() < 0.5 * residual_goal => return Ok(mid),
                Some(p) if p < targets.peak_month => lo = mid,
                // A failed evaluation this deep means b is too small to
                // produce an interior peak; move up.
                Some(_) => hi = mid,
                None => lo = mid,
            }
        }
        Err(Error::Convergence {
            solver: "growth-fit b bisection",
            max_iter: cfg.max_iter,
            residual: hi - lo,
        })
    };

    let equiv_residual = |tau: f64, iterations: &mut usize| -> Result<f64> {
        let b = solve_b(tau, iterations)?;
        let growth = GrowthParams::new(n_max, b, tau)?;
        let baseline = Scenario::new(growth, mode, "fit");
        let branch = ascending_branch(&baseline, &inner)?;
        let value = log2_complexity(targets.baseline_equiv.query_month, &baseline);
        let equiv = invert_on_branch(&baseline, &branch, value, &inner)?;
        Ok(equiv - targets.baseline_equiv.equivalent_month)
    };

    let mut fallback_iters = 0usize;
    let (mut tau_lo, mut tau_hi) = (30.0, 90.0);
    let mut r_lo = equiv_residual(tau_lo, &mut fallback_iters)?;
    let r_hi = equiv_residual(tau_hi, &mut fallback_iters)?;
    if r_lo.signum() == r_hi.signum() {
        return Err(Error::Calibration {
            what: "growth",
            detail: format!("equivalent-age residual does not change sign on tau in [{tau_lo}, {tau_hi}]"),
            residuals: vec![r_lo, r_hi],
        });
    }
    for _ in 0..cfg.max_iter {
        fallback_iters += 1;
        let mid = 0.5 * (tau_lo + tau_hi);
        let r_mid = equiv_residual(mid, &mut fallback_iters)?;
        if r_mid.abs() < residual_goal {
            let b_final = solve_b(mid, &mut fallback_iters)?;
            let growth = GrowthParams::new(n_max, b_final, mid)?;
            let r = residuals(b_final, mid).unwrap_or((f64::NAN, f64::NAN));
            return Ok(GrowthFit {
                growth,
                residuals: r,
                iterations: iterations_so_far + fallback_iters,
            });
        }
        if r_mid.signum() == r_lo.signum() {
            tau_lo = mid;
            r_lo = r_mid;
        } else {
            tau_hi = mid;
        }
    }
    Err(Error::Calibration {
        what: "growth",
        detail: "nested bisection exhausted its iteration budget".to_string(),
        residuals: vec![r_lo],
    })
}

/// Result of the weakening-constant fit.
#[derive(Debug, Clone, Copy)]
pub struct TauFit {
    pub tau: f64,
    /// Equivalent-age residual in months at the returned tau.
    pub residual: f64,
    pub iterations: usize,
}

/// Solves for the accelerated-weakening time constant tau such that the
/// double-exponential curve hits `target` against the linear-mode baseline.
///
/// Equivalent age grows with tau (slower decay leaves more complexity at
/// the query month), so plain bisection applies once a bracket is found. A
/// trial tau whose curve falls below the baseline's ascending branch reads
/// as "equivalent age too small"; one sailing above the peak reads as "too
/// large".
pub fn calibrate_weakening_tau(
    growth: &GrowthParams,
    h: f64,
    target: &EquivAnchor,
    cfg: &RootFindConfig,
) -> Result<f64> {
    Ok(calibrate_weakening_tau_traced(growth, h, target, cfg)?.tau)
}

/// Equivalent age of a trial curve, collapsed to an order against the
/// anchor: an in-range age, or a value off either end of the branch.
#[derive(Clone, Copy)]
enum Probe {
    Age(f64),
    BelowBranch,
    AboveBranch,
}

impl Probe {
    /// Where the probe sits on the branch, clamping off-branch results to
    /// the branch ends; used to report the attained range on failure.
    fn attained(self, peak_month: f64) -> f64 {
        match self {
            Probe::Age(age) => age,
            Probe::BelowBranch => 0.0,
            Probe::AboveBranch => peak_month,
        }
    }
}

pub fn calibrate_weakening_tau_traced(
    growth: &GrowthParams,
    h: f64,
    target: &EquivAnchor,
    cfg: &RootFindConfig,
) -> Result<TauFit> {
    cfg.check()?;
    let inner = cfg.inner();
    let baseline = Scenario::new(*growth, WeakeningMode::linear(h)?, "baseline");
    let branch = ascending_branch(&baseline, &inner)?;
    let residual_goal = 0.4 * cfg.abs_tol;

    let probe = |tau: f64| -> Result<Probe> {
        let mode = WeakeningMode::double_exponential(h, tau)?;
        let weakened = Scenario::new(*growth, mode, "weakened");
        let value = log2_complexity(target.query_month, &weakened);
        match invert_on_branch(&baseline, &branch, value, &inner) {
            Ok(age) => Ok(Probe::Age(age)),
            Err(Error::BelowRange { .. }) => Ok(Probe::BelowBranch),
            Err(Error::AboveRange { .. }) => Ok(Probe::AboveBranch),
            Err(other) => Err(other),
        }
    };
    let is_below = |p: Probe| match p {
        Probe::Age(age) => age < target.equivalent_month,
        Probe::BelowBranch => true,
        Probe::AboveBranch => false,
    };
    let bracket_error = |lo: f64, hi: f64| -> Result<TauFit> {
        Err(Error::Bracket {
            target: target.equivalent_month,
            lo,
            hi,
            attained_lo: probe(lo).map_or(f64::NAN, |p| p.attained(branch.peak_month)),
            attained_hi: probe(hi).map_or(f64::NAN, |p| p.attained(branch.peak_month)),
        })
    };

    let mut iterations = 0usize;
    let mut lo = 128.0;
    let mut hi = 128.0;
    let mut expansions = 0usize;
    while !is_below(probe(lo)?) {
        lo /= cfg.bracket_expansion;
        expansions += 1;
        if expansions > cfg.max_iter {
            return bracket_error(lo, hi);
        }
    }
    while is_below(probe(hi)?) {
        hi *= cfg.bracket_expansion;
        expansions += 1;
        if expansions > cfg.max_iter {
            return bracket_error(lo, hi);
        }
    }

    loop {
        iterations += 1;
        if iterations > cfg.max_iter {
            return Err(Error::Convergence {
                solver: "weakening-tau bisection",
                max_iter: cfg.max_iter,
                residual: hi - lo,
            });
        }
        let mid = 0.5 * (lo + hi);
        let p = probe(mid)?;
        if let Probe::Age(age) = p {
            if (age - target.equivalent_month).abs() < residual_goal {
                return Ok(TauFit { tau: mid, residual: age - target.equivalent_month, iterations });
            }
        }
        if is_below(p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < f64::EPSILON * hi {
            return bracket_error(lo, hi);
        }
    }
}

/// Result of the depth-curve fit.
#[derive(Debug, Clone, Copy)]
pub struct CognitionFit {
    pub params: CognitionParams,
    /// (relative residual at the intersection anchor, relative residual at the newborn anchor).
    pub residuals: (f64, f64),
    pub iterations: usize,
}

/// Solves (k, lambda) so the raw depth meets the complexity curve exactly at
/// `intersection_month` and starts at [`NEWBORN_DEPTH_FRACTION`] of newborn
/// complexity. The system is triangular — the newborn condition fixes k
/// outright, the intersection then fixes lambda — so this is a direct solve
/// verified by residual check rather than an iteration.
pub fn calibrate_cognition(
    growth: &GrowthParams,
    mode: &WeakeningMode,
    intersection_month: f64,
    cfg: &RootFindConfig,
) -> Result<CognitionParams> {
    Ok(calibrate_cognition_traced(growth, mode, intersection_month, cfg)?.params)
}

pub fn calibrate_cognition_traced(
    growth: &GrowthParams,
    mode: &WeakeningMode,
    intersection_month: f64,
    cfg: &RootFindConfig,
) -> Result<CognitionFit> {
    cfg.check()?;
    if !(intersection_month.is_finite() && intersection_month > 0.0 && intersection_month <= DEFAULT_HORIZON)
    {
        return Err(Error::Parameter {
            name: "intersection_month",
            value: intersection_month,
            constraint: "must lie in (0, horizon]",
        });
    }
    let baseline = Scenario::new(*growth, *mode, "baseline");
    let e = 1.0;
    let k0 = 1.0;
    let l = default_coupling(growth);
    let bracket = |t: f64| {
        e - l * crate::growth::neuron_count(t, growth)
            * crate::growth::neuron_count_derivative(t, growth)
    };
    let c0 = log2_complexity(0.0, &baseline);
    let cm = log2_complexity(intersection_month, &baseline);
    let k = NEWBORN_DEPTH_FRACTION * c0 / (k0 * bracket(0.0));
    let lambda_arg = cm / (k * k0 * bracket(intersection_month));
    if !(k.is_finite() && k > 0.0 && lambda_arg > 1.0) {
        return Err(Error::Calibration {
            what: "cognition",
            detail: format!(
                "no positive growth rate reaches the complexity level at month {intersection_month}"
            ),
            residuals: vec![k, lambda_arg],
        });
    }
    let lambda = lambda_arg.ln() / intersection_month;
    let params = CognitionParams::new(k, e, l, lambda, k0, growth)?;
    let r_intersection = (cognitive_depth_raw(intersection_month, &params, growth) - cm) / cm;
    let r_newborn = (cognitive_depth_raw(0.0, &params, growth) - NEWBORN_DEPTH_FRACTION * c0) / c0;
    let tol = 1e-9;
    if r_intersection.abs() > tol || r_newborn.abs() > tol {
        return Err(Error::Calibration {
            what: "cognition",
            detail: "direct solve failed its residual check".to_string(),
            residuals: vec![r_intersection, r_newborn],
        });
    }
    Ok(CognitionFit { params, residuals: (r_intersection, r_newborn), iterations: 1 })
}

/// Month where the raw depth curve crosses the complexity curve, to
/// `cfg.abs_tol`. The 1-month scan must see exactly one sign change.
pub fn find_intersection(
    params: &CognitionParams,
    scenario: &Scenario,
    cfg: &RootFindConfig,
) -> Result<f64> {
    cfg.check()?;
    let diff = |t: f64| {
        cognitive_depth_raw(t, params, &scenario.growth) - log2_complexity(t, scenario)
    };
    let mut crossings: Vec<(f64, f64)> = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_d = diff(0.0);
    let steps = DEFAULT_HORIZON as usize;
    for i in 1..=steps {
        let t = i as f64;
        let d = diff(t);
        if prev_d == 0.0 {
            crossings.push((prev_t, prev_t));
        } else if prev_d.signum() != d.signum() && d != 0.0 {
            crossings.push((prev_t, t));
        }
        prev_t = t;
        prev_d = d;
    }
    if prev_d == 0.0 {
        crossings.push((prev_t, prev_t));
    }
    if crossings.len() != 1 {
        return Err(Error::CrossingCount {
            crossings: crossings.iter().map(|&(lo, _)| lo).collect(),
        });
    }
    let (mut lo, mut hi) = crossings[0];
    if lo == hi {
        return Ok(lo);
    }
    let mut d_lo = diff(lo);
    let mut iterations = 0;
    while hi - lo > cfg.abs_tol {
        if iterations >= cfg.max_iter {
            return Err(Error::Convergence {
                solver: "intersection bisection",
                max_iter: cfg.max_iter,
                residual: hi - lo,
            });
        }
        let mid = 0.5 * (lo + hi);
        let d_mid = diff(mid);
        if d_mid == 0.0 {
            return Ok(mid);
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(0.5 * (lo + hi))
}

/// Everything `calibrate` produces, with residuals and iteration counts for
/// the params report.
#[derive(Debug, Clone, Copy)]
pub struct FullCalibration {
    pub growth: GrowthParams,
    pub weaken_tau: f64,
    pub cognition: CognitionParams,
    /// Months: peak, baseline equiv, weakened equiv; last is the intersection
    /// residual in months measured by re-running find_intersection.
    pub residual_peak: f64,
    pub residual_baseline_equiv: f64,
    pub residual_weaken_equiv: f64,
    pub residual_intersection: f64,
    pub iterations_growth: usize,
    pub iterations_weaken_tau: usize,
    pub iterations_cognition: usize,
}

/// Runs the three calibration stages in sequence against one target set.
pub fn full_calibration(
    targets: &CalibrationTargets,
    h: f64,
    n_max: f64,
    cfg: &RootFindConfig,
) -> Result<FullCalibration> {
    let growth_fit = calibrate_growth_scaled(targets, h, n_max, cfg)?;
    let growth = growth_fit.growth;
    let tau_fit = calibrate_weakening_tau_traced(&growth, h, &targets.exp_weaken_equiv, cfg)?;
    let mode = WeakeningMode::linear(h)?;
    let cognition_fit = calibrate_cognition_traced(&growth, &mode, targets.intersection_month, cfg)?;
    let baseline = Scenario::new(growth, mode, "baseline");
    let intersection = find_intersection(&cognition_fit.params, &baseline, cfg)?;
    Ok(FullCalibration {
        growth,
        weaken_tau: tau_fit.tau,
        cognition: cognition_fit.params,
        residual_peak: growth_fit.residuals.0,
        residual_baseline_equiv: growth_fit.residuals.1,
        residual_weaken_equiv: tau_fit.residual,
        residual_intersection: intersection - targets.intersection_month,
        iterations_growth: growth_fit.iterations,
        iterations_weaken_tau: tau_fit.iterations,
        iterations_cognition: cognition_fit.iterations,
    })
}
