//! Uniqueness probe: under window-level GFR proportionality the endpoint
//! derivatives of the interval measures define two one-variable functions
//! (one per GFR endpoint) that are convex, negative near zero and grow
//! without bound, so each has a unique positive root — and that root must
//! be the corresponding GFR value of the actual law. The probe rebuilds
//! both functions numerically and recovers the roots by bracketed
//! bisection.

use serde_json::json;

use super::LawReport;
use crate::dist::{ModelPair, TruncationWindow};
use crate::error::Result;
use crate::measures::{self, Route};
use crate::quad::QuadratureConfig;

const ROOT_TOL_REL: f64 = 1e-4;
const CONVEXITY_POINTS: usize = 50;

fn interval_h(pair: &ModelPair, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(measures::interval_inaccuracy_via(pair, &TruncationWindow::new(t1, t2)?, cfg, Route::ForceQuadrature)?.value)
}

fn weighted_h(pair: &ModelPair, t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(
        measures::weighted_interval_inaccuracy_via(pair, &TruncationWindow::new(t1, t2)?, cfg, Route::ForceQuadrature)?
            .value,
    )
}

// Bracketed bisection for an increasing-through-zero convex function:
// eta(lo) < 0, the bracket is grown geometrically until eta > 0, then
// bisected to relative width 1e-12.
fn bisect_root<F: Fn(f64) -> f64>(eta: F, mut lo: f64) -> Option<f64> {
    let mut hi = 1.0;
    let mut grow = 0;
    while eta(hi) <= 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 400 {
            return None;
        }
    }
    if eta(lo) >= 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eta(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Run the probe at one window. Inconclusive when the monotonicity
/// hypotheses fail there; otherwise pass iff both roots match the GFR
/// values of the actual law within `1e-4` relative and the structure
/// checks (negative near zero, convex, eventually positive) hold.
pub fn uniqueness_probe(pair: &ModelPair, w: &TruncationWindow, cfg: &QuadratureConfig) -> Result<LawReport> {
    let params = json!({
        "actual": pair.actual.name(),
        "assigned": pair.assigned.name(),
        "t1": w.t1,
        "t2": w.t2,
    });

    let (t1, t2) = (w.t1, w.t2);
    let h_step = 1e-5 * t1.abs().max(1.0);

    // Hypothesis: the weighted measure increases in t1 and decreases in t2
    // near the window (central finite differences).
    let dhw_dt1 = (weighted_h(pair, t1 + h_step, t2, cfg)? - weighted_h(pair, t1 - h_step, t2, cfg)?) / (2.0 * h_step);
    let dhw_dt2 = (weighted_h(pair, t1, t2 + h_step, cfg)? - weighted_h(pair, t1, t2 - h_step, cfg)?) / (2.0 * h_step);
    if !(dhw_dt1 > 0.0 && dhw_dt2 < 0.0) {
        return Ok(LawReport::inconclusive(
            "uniqueness",
            params,
            format!("hypothesis fails: dHw/dt1 = {dhw_dt1:.3e}, dHw/dt2 = {dhw_dt2:.3e}"),
        ));
    }

    let h = interval_h(pair, t1, t2, cfg)?;
    let dh_dt1 = (interval_h(pair, t1 + h_step, t2, cfg)? - interval_h(pair, t1 - h_step, t2, cfg)?) / (2.0 * h_step);
    let dh_dt2 = (interval_h(pair, t1, t2 + h_step, cfg)? - interval_h(pair, t1, t2 - h_step, cfg)?) / (2.0 * h_step);
    if !(dh_dt1 > 0.0 && dh_dt2 < 0.0) {
        return Ok(LawReport::inconclusive(
            "uniqueness",
            params,
            format!("interval measure not monotone at the window: dH/dt1 = {dh_dt1:.3e}, dH/dt2 = {dh_dt2:.3e}"),
        ));
    }

    // Window-level proportionality constants from the GFR ratio.
    let (h1x, h2x) = measures::gfr(&pair.actual, w)?;
    let (h1y, h2y) = measures::gfr(&pair.assigned, w)?;
    let theta1 = h1y / h1x;
    let theta2 = h2y / h2x;

    // kappa follows the endpoint-derivative convention d/dt_i Hw = t_i d/dt_i H
    let eta = |v: f64| -> f64 { t1 * v * (h + theta1.ln() - theta1 + v.ln()) - t1 * dh_dt1 };
    let zeta = |v: f64| -> f64 { t2 * v * (h + theta2.ln() - theta2 + v.ln()) + t2 * dh_dt2 };

    let mut reasons = Vec::new();
    let mut check_structure = |name: &str, func: &dyn Fn(f64) -> f64| {
        // negative near zero
        if !(func(1e-12) < 0.0) {
            reasons.push(format!("{name}(1e-12) is not negative"));
        }
        // convex: positive second differences across four decades
        for j in 0..CONVEXITY_POINTS {
            let v = 1e-2 * 1e4f64.powf(j as f64 / (CONVEXITY_POINTS - 1) as f64);
            let d = 1e-3 * v;
            let second = func(v - d) - 2.0 * func(v) + func(v + d);
            if second <= 0.0 {
                reasons.push(format!("{name} second difference not positive at v = {v:.3e}"));
                break;
            }
        }
    };
    check_structure("eta", &eta);
    check_structure("zeta", &zeta);

    let root1 = bisect_root(eta, 1e-12);
    let root2 = bisect_root(zeta, 1e-12);
    let (res1, res2) = match (root1, root2) {
        (Some(r1), Some(r2)) => ((r1 - h1x) / h1x, (r2 - h2x) / h2x),
        _ => {
            return Ok(LawReport::inconclusive(
                "uniqueness",
                params,
                "no positive root bracketed".to_string(),
            ));
        }
    };

    let mut report = LawReport::equality(
        "uniqueness",
        params,
        vec![*w, *w],
        vec![res1, res2],
        ROOT_TOL_REL,
    );
    if !reasons.is_empty() {
        report.verdict = super::Verdict::Fail;
        report.reason = Some(reasons.join("; "));
    }
    Ok(report)
}
