//! Characterization residuals: each named family satisfies an identity
//! linking the weighted interval inaccuracy of an (X, model(X)) pair to
//! conditional log-moments of X, and only that family satisfies it. The
//! verifier evaluates both sides independently and reports the residuals;
//! an out-of-family X drives them away from zero.

use serde_json::json;

use super::{equality_tolerance, LawReport};
use crate::dist::{Distribution, ModelPair, TruncationWindow};
use crate::error::{Error, Result};
use crate::measures;
use crate::quad::QuadratureConfig;

/// Which GFR endpoint the relation is stated at: `H1` is the theorem form,
/// `H2` the corollary form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    H1,
    H2,
}

/// The claimed family, with the parameters entering the right-hand side,
/// and the hazard model the construction of Y uses.
#[derive(Debug, Clone, Copy)]
pub enum CharFamily {
    /// uniform on (alpha, beta) under the proportional reversed hazard model
    Uniform { alpha: f64, beta: f64 },
    /// power law F = (t/b)^c under the proportional reversed hazard model
    Power { b: f64, c: f64 },
    /// Weibull survival exp(-lambda t^p) under the proportional hazard model
    Weibull { lambda: f64, p: f64 },
    /// Pareto-I under the proportional hazard model
    Pareto1 { alpha: f64, beta: f64 },
    /// Pareto-II under the proportional hazard model
    Pareto2 { mu: f64, beta: f64, alpha: f64 },
}

impl CharFamily {
    pub fn uses_reversed_hazard_model(&self) -> bool {
        matches!(self, CharFamily::Uniform { .. } | CharFamily::Power { .. })
    }

    pub fn id(&self) -> &'static str {
        match self {
            CharFamily::Uniform { .. } => "uniform_prhrm",
            CharFamily::Power { .. } => "power_prhrm",
            CharFamily::Weibull { .. } => "weibull_phrm",
            CharFamily::Pareto1 { .. } => "pareto1_phrm",
            CharFamily::Pareto2 { .. } => "pareto2_phrm",
        }
    }

    pub fn params_json(&self) -> serde_json::Value {
        match self {
            CharFamily::Uniform { alpha, beta } => json!({"family": "uniform", "alpha": alpha, "beta": beta}),
            CharFamily::Power { b, c } => json!({"family": "power", "b": b, "c": c}),
            CharFamily::Weibull { lambda, p } => json!({"family": "weibull", "lambda": lambda, "p": p}),
            CharFamily::Pareto1 { alpha, beta } => json!({"family": "pareto1", "alpha": alpha, "beta": beta}),
            CharFamily::Pareto2 { mu, beta, alpha } => {
                json!({"family": "pareto2", "mu": mu, "beta": beta, "alpha": alpha})
            }
        }
    }

    // The theorem's parameter region for the window, with the violated
    // constraint named in the error.
    fn check_region(&self, w: &TruncationWindow) -> Result<()> {
        match self {
            CharFamily::Uniform { alpha, beta } => {
                if !(w.t1 > *alpha) {
                    return Err(Error::parameter("t1", format!("need alpha < t1, got t1 = {} <= alpha = {alpha}", w.t1)));
                }
                if !(w.t2 < *beta) {
                    return Err(Error::parameter("t2", format!("need t2 < beta, got t2 = {} >= beta = {beta}", w.t2)));
                }
            }
            CharFamily::Power { b, .. } => {
                if !(w.t1 > 0.0) {
                    return Err(Error::parameter("t1", format!("need 0 < t1, got {}", w.t1)));
                }
                if !(w.t2 < *b) {
                    return Err(Error::parameter("t2", format!("need t2 < b, got t2 = {} >= b = {b}", w.t2)));
                }
            }
            CharFamily::Weibull { .. } => {
                if !(w.t1 > 0.0) {
                    return Err(Error::parameter("t1", format!("need 0 < t1, got {}", w.t1)));
                }
            }
            CharFamily::Pareto1 { beta, .. } => {
                if !(w.t1 > *beta) {
                    return Err(Error::parameter("t1", format!("need beta < t1, got t1 = {} <= beta = {beta}", w.t1)));
                }
            }
            CharFamily::Pareto2 { mu, .. } => {
                if !(w.t1 > *mu) {
                    return Err(Error::parameter("t1", format!("need mu < t1, got t1 = {} <= mu = {mu}", w.t1)));
                }
            }
        }
        Ok(())
    }

    // Right-hand side of the relation at GFR endpoint value `t`
    // (t1 for the theorem form, t2 for the corollary form).
    fn rhs(
        &self,
        x: &Distribution,
        w: &TruncationWindow,
        theta: f64,
        t: f64,
        cfg: &QuadratureConfig,
    ) -> Result<(f64, f64)> {
        let m = measures::gcm_via(x, w, cfg, measures::Route::ForceQuadrature)?;
        match self {
            CharFamily::Uniform { alpha, .. } => {
                let gz = measures::weighted_log_moment(x, w, *alpha, cfg)?;
                let v = (1.0 - theta) * (gz.value - m.value * (t - alpha).ln());
                Ok((v, gz.error_estimate + m.error_estimate))
            }
            CharFamily::Power { c, .. } => {
                let gw = measures::weighted_log_moment(x, w, 0.0, cfg)?;
                let v = (1.0 - c * theta) * (gw.value - m.value * t.ln());
                Ok((v, gw.error_estimate + m.error_estimate))
            }
            CharFamily::Weibull { lambda, p } => {
                let gw = measures::weighted_log_moment(x, w, 0.0, cfg)?;
                let mp1 = measures::conditional_power_moment(x, w, p + 1.0, cfg)?;
                let v = (1.0 - p) * (gw.value - m.value * t.ln())
                    + lambda * theta * (mp1.value - t.powf(*p) * m.value);
                Ok((v, gw.error_estimate + mp1.error_estimate + m.error_estimate))
            }
            CharFamily::Pareto1 { alpha, .. } => {
                let gw = measures::weighted_log_moment(x, w, 0.0, cfg)?;
                let v = (alpha * theta + 1.0) * (gw.value - m.value * t.ln());
                Ok((v, gw.error_estimate + m.error_estimate))
            }
            CharFamily::Pareto2 { mu, beta, alpha } => {
                let gz = measures::weighted_log_moment(x, w, mu - beta, cfg)?;
                let v = (alpha * theta + 1.0) * (gz.value - m.value * (t - mu + beta).ln());
                Ok((v, gz.error_estimate + m.error_estimate))
            }
        }
    }
}

/// Evaluate the characterization residual `LHS - RHS` on each window, where
/// `LHS = H^w_{X,Y}(t1,t2) + m_X ln h_i^Y(t1,t2)` with `Y` built from `X`
/// by the family's hazard model with constant `theta`.
pub fn characterization_residual(
    family: &CharFamily,
    x: &Distribution,
    theta: f64,
    endpoint: Endpoint,
    windows: &[TruncationWindow],
    cfg: &QuadratureConfig,
) -> Result<LawReport> {
    let y = if family.uses_reversed_hazard_model() {
        Distribution::prhrm(x.clone(), theta)?
    } else {
        Distribution::phrm(x.clone(), theta)?
    };
    let pair = ModelPair::new(x.clone(), y)?;

    let mut residuals = Vec::with_capacity(windows.len());
    let mut tolerance: f64 = 0.0;
    for w in windows {
        family.check_region(w)?;
        let hw = measures::weighted_interval_inaccuracy_via(&pair, w, cfg, measures::Route::ForceQuadrature)?;
        let m = measures::gcm_via(x, w, cfg, measures::Route::ForceQuadrature)?;
        let (h1, h2) = measures::gfr(&pair.assigned, w)?;
        let (h, t) = match endpoint {
            Endpoint::H1 => (h1, w.t1),
            Endpoint::H2 => (h2, w.t2),
        };
        let lhs = hw.value + m.value * h.ln();
        let (rhs, rhs_err) = family.rhs(x, w, theta, t, cfg)?;
        residuals.push(lhs - rhs);
        tolerance = tolerance.max(equality_tolerance(
            hw.error_estimate + m.error_estimate * h.ln().abs() + rhs_err,
        ));
    }
    let params = json!({
        "check": family.params_json(),
        "x": x.name(),
        "theta": theta,
        "endpoint": if endpoint == Endpoint::H1 { "h1" } else { "h2" },
    });
    Ok(LawReport::equality(family.id(), params, windows.to_vec(), residuals, tolerance))
}
