//! Numerical verifiers for the bounds, identities, characterization
//! relations and transform laws satisfied by the weighted interval
//! inaccuracy measure. Every verifier evaluates both sides of its relation
//! through independent routes (quadrature, finite differences, closed
//! moments) and emits a [`LawReport`] with per-window residuals.

mod bounds;
mod characterize;
mod fixtures;
mod identities;
mod transform_law;
mod uniqueness;

pub use bounds::{check_bound_prop21, check_bound_thm21, check_bound_thm22, check_remark24};
pub use characterize::{characterization_residual, CharFamily, Endpoint};
pub use fixtures::{law_ids, run_law, CharOverride, FIXTURE_VERSION};
pub use identities::{
    check_alternative_forms, check_decomposition, check_decomposition_degenerate,
    check_derivative_relations, check_limits, decomposition_report,
};
pub use transform_law::transform_identity;
pub use uniqueness::uniqueness_probe;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::{ModelPair, TruncationWindow};

/// Fixed slack for inequality (bound) checks: a margin may dip this far
/// below zero before it counts as a violation, so roundoff cannot fail a
/// true bound.
pub const BOUND_SLACK: f64 = 1e-8;

/// Equality tolerance floor; the effective tolerance is
/// `max(EQUALITY_TOL_FLOOR, 10 * summed quadrature error estimates)`.
pub const EQUALITY_TOL_FLOOR: f64 = 1e-6;

pub fn equality_tolerance(error_sum: f64) -> f64 {
    EQUALITY_TOL_FLOOR.max(10.0 * error_sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Structured outcome of one law verification.
///
/// For equality laws `residuals` are signed differences (pass iff
/// `|r| <= tolerance`); for bound laws they are margins into the feasible
/// side (pass iff `r >= -tolerance`).
#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub law_id: String,
    pub params: serde_json::Value,
    pub windows: Vec<TruncationWindow>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl LawReport {
    pub fn equality(
        law_id: impl Into<String>,
        params: serde_json::Value,
        windows: Vec<TruncationWindow>,
        residuals: Vec<f64>,
        tolerance: f64,
    ) -> Self {
        let ok = residuals.iter().all(|r| r.is_finite() && r.abs() <= tolerance);
        LawReport {
            law_id: law_id.into(),
            params,
            windows,
            residuals,
            tolerance,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            reason: None,
        }
    }

    pub fn bound(
        law_id: impl Into<String>,
        params: serde_json::Value,
        windows: Vec<TruncationWindow>,
        margins: Vec<f64>,
        slack: f64,
    ) -> Self {
        let ok = margins.iter().all(|m| m.is_finite() && *m >= -slack);
        LawReport {
            law_id: law_id.into(),
            params,
            windows,
            residuals: margins,
            tolerance: slack,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            reason: None,
        }
    }

    pub fn inconclusive(law_id: impl Into<String>, params: serde_json::Value, reason: impl Into<String>) -> Self {
        LawReport {
            law_id: law_id.into(),
            params,
            windows: Vec::new(),
            residuals: Vec::new(),
            tolerance: 0.0,
            verdict: Verdict::Inconclusive,
            reason: Some(reason.into()),
        }
    }

    /// Merge several sub-reports (e.g. one per instance) into one report
    /// under a single law id. The verdict is the worst of the parts.
    pub fn merge(law_id: impl Into<String>, parts: Vec<LawReport>) -> Self {
        let mut windows = Vec::new();
        let mut residuals = Vec::new();
        let mut params = Vec::new();
        let mut tolerance: f64 = 0.0;
        let mut verdict = Verdict::Pass;
        let mut reasons: Vec<String> = Vec::new();
        for part in parts {
            params.push(serde_json::json!({
                "params": part.params,
                "verdict": part.verdict,
            }));
            windows.extend(part.windows);
            residuals.extend(part.residuals);
            tolerance = tolerance.max(part.tolerance);
            match part.verdict {
                Verdict::Fail => verdict = Verdict::Fail,
                Verdict::Inconclusive if verdict == Verdict::Pass => verdict = Verdict::Inconclusive,
                _ => {}
            }
            if let Some(r) = part.reason {
                reasons.push(r);
            }
        }
        LawReport {
            law_id: law_id.into(),
            params: serde_json::Value::Array(params),
            windows,
            residuals,
            tolerance,
            verdict,
            reason: if reasons.is_empty() { None } else { Some(reasons.join("; ")) },
        }
    }
}

/// Direction of a probed function on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
}

/// Classify a value sequence by the signs of its consecutive differences.
/// A single sign change makes the result `NonMonotone` (callers then report
/// inconclusive rather than pass/fail).
pub fn classify_monotonicity(values: &[f64]) -> Monotonicity {
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let mut inc = false;
    let mut dec = false;
    for pair in values.windows(2) {
        let d = pair[1] - pair[0];
        if d > tol {
            inc = true;
        } else if d < -tol {
            dec = true;
        }
    }
    match (inc, dec) {
        (true, true) => Monotonicity::NonMonotone,
        (true, false) => Monotonicity::Increasing,
        (false, true) => Monotonicity::Decreasing,
        (false, false) => Monotonicity::Constant,
    }
}

/// Stratified window grid: quantile pairs of the actual law with a minimum
/// quantile gap, redrawn until the window lies in D and in the caller's
/// region. Fixed seed, fixed stratum order — fully reproducible.
pub fn sample_windows(
    pair: &ModelPair,
    n: usize,
    seed: u64,
    region: Option<&dyn Fn(f64, f64) -> bool>,
) -> Vec<TruncationWindow> {
    const Q_LO: f64 = 0.02;
    const Q_HI: f64 = 0.98;
    const MIN_GAP: f64 = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        for _attempt in 0..200 {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            let q1 = Q_LO + (k as f64 + u) / n as f64 * (Q_HI - MIN_GAP - Q_LO);
            let q2 = q1 + MIN_GAP + v * (Q_HI - q1 - MIN_GAP);
            let t1 = pair.actual.quantile(q1);
            let t2 = pair.actual.quantile(q2);
            if !(t1.is_finite() && t2.is_finite() && t1 < t2) {
                continue;
            }
            let w = TruncationWindow { t1, t2 };
            if !pair.window_in_domain(&w) {
                continue;
            }
            if let Some(r) = region {
                if !r(t1, t2) {
                    continue;
                }
            }
            out.push(w);
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;

    #[test]
    fn sampler_is_deterministic_and_in_domain() {
        let pair = ModelPair::new(
            Distribution::triangular_up(2.0).unwrap(),
            Distribution::triangular_down(2.0).unwrap(),
        )
        .unwrap();
        let a = sample_windows(&pair, 10, 42, None);
        let b = sample_windows(&pair, 10, 42, None);
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.t1.to_bits(), y.t1.to_bits());
            assert_eq!(x.t2.to_bits(), y.t2.to_bits());
        }
        for w in &a {
            assert!(pair.window_in_domain(w));
            assert!(w.width() > 0.0);
        }
    }

    #[test]
    fn monotonicity_classifier() {
        assert_eq!(classify_monotonicity(&[1.0, 2.0, 3.0]), Monotonicity::Increasing);
        assert_eq!(classify_monotonicity(&[3.0, 2.0, 1.0]), Monotonicity::Decreasing);
        assert_eq!(classify_monotonicity(&[1.0, 1.0, 1.0]), Monotonicity::Constant);
        assert_eq!(classify_monotonicity(&[1.0, 2.0, 1.5]), Monotonicity::NonMonotone);
    }
}
