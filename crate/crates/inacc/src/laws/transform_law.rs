//! Monotone-transform identity: the weighted interval inaccuracy of the
//! transformed pair (phi(X), phi(Y)) equals the phi-weighted inaccuracy of
//! the original pair over the preimage window plus the conditional mean of
//! phi(X) ln |phi'(X)| there, with the window swapped on the decreasing
//! branch. Both sides are evaluated by independent quadratures.

use serde_json::json;

use super::{equality_tolerance, LawReport};
use crate::dist::{Distribution, ModelPair, MonotoneMap, TruncationWindow};
use crate::error::Result;
use crate::measures::{self, Route};
use crate::quad::{self, QuadratureConfig};

/// Verify the identity for one map and one window in the *transformed*
/// scale. Returns a single-residual report.
pub fn transform_identity(
    pair: &ModelPair,
    map: &MonotoneMap,
    w: &TruncationWindow,
    cfg: &QuadratureConfig,
) -> Result<LawReport> {
    let x_t = Distribution::transformed(pair.actual.clone(), map.clone())?;
    let y_t = Distribution::transformed(pair.assigned.clone(), map.clone())?;
    let transformed = ModelPair::new(x_t, y_t)?;
    let lhs = measures::weighted_interval_inaccuracy_via(&transformed, w, cfg, Route::ForceQuadrature)?;

    // preimage window, swapped on the decreasing branch
    let (a, b) = if map.increasing() {
        (map.invert(w.t1), map.invert(w.t2))
    } else {
        (map.invert(w.t2), map.invert(w.t1))
    };
    let df = pair.actual.cdf(b) - pair.actual.cdf(a);
    let ln_dg = (pair.assigned.cdf(b) - pair.assigned.cdf(a)).ln();
    let f = &pair.actual;
    let g = &pair.assigned;

    // H^{w,phi}: the phi-weighted inaccuracy over the preimage window
    let hw_phi = quad::integrate(
        |x| {
            let fx = f.pdf(x);
            if fx == 0.0 {
                return 0.0;
            }
            let lg = match g.log_pdf(x) {
                Ok(v) => v,
                Err(_) => return f64::INFINITY,
            };
            -map.apply(x) * fx * (lg - ln_dg)
        },
        a,
        b,
        cfg,
    )?;

    // E[phi(X) ln |phi'(X)| | a < X < b]
    let deriv_term = quad::integrate(
        |x| {
            let fx = f.pdf(x);
            if fx == 0.0 {
                return 0.0;
            }
            map.apply(x) * map.derivative(x).abs().ln() * fx
        },
        a,
        b,
        cfg,
    )?;

    let rhs = hw_phi.value / df + deriv_term.value / df;
    let residual = lhs.value - rhs;
    let tol = equality_tolerance(lhs.error_estimate + (hw_phi.error_estimate + deriv_term.error_estimate) / df);

    let params = json!({
        "actual": pair.actual.name(),
        "assigned": pair.assigned.name(),
        "map": transformed_name(map),
        "increasing": map.increasing(),
        "preimage": [a, b],
    });
    Ok(LawReport::equality("transform", params, vec![*w], vec![residual], tol))
}

fn transformed_name(map: &MonotoneMap) -> String {
    match map {
        MonotoneMap::Identity => "identity".to_string(),
        MonotoneMap::Affine { a, b } => format!("affine({a},{b})"),
        MonotoneMap::Square => "square".to_string(),
        MonotoneMap::Reciprocal => "reciprocal".to_string(),
        MonotoneMap::Cdf(d) => format!("cdf[{}]", d.name()),
        MonotoneMap::Sf(d) => format!("sf[{}]", d.name()),
    }
}
