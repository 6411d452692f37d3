//! Bound verifiers: the monotone-density proposition and the two
//! GFR-monotonicity bound theorems, with the past-inaccuracy reduction.
//!
//! Margins are signed distances into the feasible side of each inequality;
//! a bound holds when every margin stays above `-BOUND_SLACK`.

use serde_json::json;

use super::{classify_monotonicity, LawReport, Monotonicity, BOUND_SLACK};
use crate::dist::{Distribution, ModelPair, TruncationWindow};
use crate::error::Result;
use crate::measures;
use crate::quad::{self, QuadratureConfig};

const PROBE_POINTS: usize = 200;

// Probe a density's direction on its support interior.
fn density_monotonicity(dist: &Distribution) -> Monotonicity {
    let (lo, hi) = dist.support();
    let values: Vec<f64> = (1..=PROBE_POINTS)
        .map(|i| {
            let q = i as f64 / (PROBE_POINTS + 1) as f64;
            let x = if hi.is_finite() {
                lo + q * (hi - lo)
            } else {
                dist.quantile(q * 0.995)
            };
            dist.pdf(x)
        })
        .collect();
    classify_monotonicity(&values)
}

/// Bounds from a monotone assigned density g: for decreasing g,
///   -m_X ln h1^Y <= H^w <= -m_X ln h2^Y,
/// reversed for increasing g, both with equality for constant g.
pub fn check_bound_prop21(
    pair: &ModelPair,
    windows: &[TruncationWindow],
    cfg: &QuadratureConfig,
) -> Result<LawReport> {
    let direction = density_monotonicity(&pair.assigned);
    let params = json!({
        "actual": pair.actual.name(),
        "assigned": pair.assigned.name(),
        "density_direction": format!("{direction:?}"),
    });
    if direction == Monotonicity::NonMonotone {
        return Ok(LawReport::inconclusive(
            "prop21",
            params,
            format!("assigned density of {} is not monotone", pair.assigned.name()),
        ));
    }
    let mut margins = Vec::with_capacity(windows.len());
    for w in windows {
        let hw = measures::weighted_interval_inaccuracy(pair, w, cfg)?.value;
        let m = measures::gcm(&pair.actual, w, cfg)?.value;
        let (h1, h2) = measures::gfr(&pair.assigned, w)?;
        let lower = -m * h1.ln();
        let upper = -m * h2.ln();
        let margin = match direction {
            Monotonicity::Decreasing => (hw - lower).min(upper - hw),
            Monotonicity::Increasing => (lower - hw).min(hw - upper),
            // constant density: both chains collapse to equalities
            Monotonicity::Constant => -((hw - lower).abs().max(hw - upper).abs()),
            Monotonicity::NonMonotone => unreachable!(),
        };
        margins.push(margin);
    }
    Ok(LawReport::bound("prop21", params, windows.to_vec(), margins, BOUND_SLACK))
}

// Correction integral of the first bound theorem:
//   (1/dF) \int_{t1}^{t2} x f(x) ln[(G(t2)-G(x))/(G(t2)-G(t1))] dx
fn correction_upper_t2(pair: &ModelPair, w: &TruncationWindow, cfg: &QuadratureConfig) -> Result<f64> {
    let df = pair.actual.cdf(w.t2) - pair.actual.cdf(w.t1);
    let g2 = pair.assigned.cdf(w.t2);
    let dg = g2 - pair.assigned.cdf(w.t1);
    let f = &pair.actual;
    let g = &pair.assigned;
    let r = quad::integrate(
        |x| {
            let fx = f.pdf(x);
            if fx == 0.0 {
                return 0.0;
            }
            x * fx * ((g2 - g.cdf(x)) / dg).ln()
        },
        w.t1,
        w.t2,
        cfg,
    )?;
    Ok(r.value / df)
}

// Mirror-image correction for the second bound theorem:
//   (1/dF) \int_{t1}^{t2} x f(x) ln[(G(x)-G(t1))/(G(t2)-G(t1))] dx
fn correction_lower_t1(pair: &ModelPair, w: &TruncationWindow, cfg: &QuadratureConfig) -> Result<f64> {
    let df = pair.actual.cdf(w.t2) - pair.actual.cdf(w.t1);
    let g1 = pair.assigned.cdf(w.t1);
    let dg = pair.assigned.cdf(w.t2) - g1;
    let f = &pair.actual;
    let g = &pair.assigned;
    let r = quad::integrate(
        |x| {
            let fx = f.pdf(x);
            if fx == 0.0 {
                return 0.0;
            }
            x * fx * ((g.cdf(x) - g1) / dg).ln()
        },
        w.t1,
        w.t2,
        cfg,
    )?;
    Ok(r.value / df)
}

/// Bounds from the monotonicity of `h1^Y(t1, t2)` in `t1` at fixed `t2`:
/// part (i) `H^w >= -m_X ln h1^Y` when decreasing, part (ii) the
/// corrected upper bound when increasing.
pub fn check_bound_thm21(
    pair: &ModelPair,
    t2: f64,
    t1_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<LawReport> {
    let lo = t1_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t1_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let probe: Vec<f64> = (0..PROBE_POINTS)
        .map(|i| {
            let t1 = lo + (hi - lo) * i as f64 / (PROBE_POINTS - 1) as f64;
            measures::gfr(&pair.assigned, &TruncationWindow { t1, t2 })
                .map(|(h1, _)| h1)
                .unwrap_or(f64::NAN)
        })
        .collect();
    let direction = classify_monotonicity(&probe);
    let params = json!({
        "actual": pair.actual.name(),
        "assigned": pair.assigned.name(),
        "t2": t2,
        "h1_direction": format!("{direction:?}"),
    });
    match direction {
        Monotonicity::NonMonotone | Monotonicity::Constant => {
            return Ok(LawReport::inconclusive(
                "thm21",
                params,
                format!("h1 of {} is {direction:?} in t1 on the grid", pair.assigned.name()),
            ));
        }
        _ => {}
    }
    let mut windows = Vec::new();
    let mut margins = Vec::new();
    for &t1 in t1_grid {
        let w = TruncationWindow::new(t1, t2)?;
        let hw = measures::weighted_interval_inaccuracy(pair, &w, cfg)?.value;
        let m = measures::gcm(&pair.actual, &w, cfg)?.value;
        let (h1, _) = measures::gfr(&pair.assigned, &w)?;
        let margin = match direction {
            Monotonicity::Decreasing => hw - (-m * h1.ln()),
            Monotonicity::Increasing => {
                let corr = correction_upper_t2(pair, &w, cfg)?;
                (-m * h1.ln() - corr) - hw
            }
            _ => unreachable!(),
        };
        windows.push(w);
        margins.push(margin);
    }
    Ok(LawReport::bound("thm21", params, windows, margins, BOUND_SLACK))
}

/// Bounds from the monotonicity of `h2^Y(t1, t2)` in `t2` at fixed `t1`:
/// the corrected upper bound when decreasing, and the plain lower bound
/// `H^w >= -m_X ln h2^Y` when increasing (possible only on bounded
/// supports).
pub fn check_bound_thm22(
    pair: &ModelPair,
    t1: f64,
    t2_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<LawReport> {
    let lo = t2_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t2_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let probe: Vec<f64> = (0..PROBE_POINTS)
        .map(|i| {
            let t2 = lo + (hi - lo) * i as f64 / (PROBE_POINTS - 1) as f64;
            measures::gfr(&pair.assigned, &TruncationWindow { t1, t2 })
                .map(|(_, h2)| h2)
                .unwrap_or(f64::NAN)
        })
        .collect();
    let direction = classify_monotonicity(&probe);
    let params = json!({
        "actual": pair.actual.name(),
        "assigned": pair.assigned.name(),
        "t1": t1,
        "h2_direction": format!("{direction:?}"),
    });
    match direction {
        Monotonicity::NonMonotone | Monotonicity::Constant => {
            return Ok(LawReport::inconclusive(
                "thm22",
                params,
                format!("h2 of {} is {direction:?} in t2 on the grid", pair.assigned.name()),
            ));
        }
        _ => {}
    }
    let mut windows = Vec::new();
    let mut margins = Vec::new();
    for &t2 in t2_grid {
        let w = TruncationWindow::new(t1, t2)?;
        let hw = measures::weighted_interval_inaccuracy(pair, &w, cfg)?.value;
        let m = measures::gcm(&pair.actual, &w, cfg)?.value;
        let (_, h2) = measures::gfr(&pair.assigned, &w)?;
        let margin = match direction {
            Monotonicity::Decreasing => {
                let corr = correction_lower_t1(pair, &w, cfg)?;
                (-m * h2.ln() - corr) - hw
            }
            Monotonicity::Increasing => hw - (-m * h2.ln()),
            _ => unreachable!(),
        };
        windows.push(w);
        margins.push(margin);
    }
    Ok(LawReport::bound("thm22", params, windows, margins, BOUND_SLACK))
}

/// The `t1 -> 0` reduction of the second bound theorem: an upper bound on
/// the weighted past inaccuracy in terms of the conditional mean, the
/// reversed hazard of the assigned law and the integral of `x f / G`.
pub fn check_remark24(pair: &ModelPair, t2_grid: &[f64], cfg: &QuadratureConfig) -> Result<LawReport> {
    let (flo, _) = pair.actual.support();
    let params = json!({
        "actual": pair.actual.name(),
        "assigned": pair.assigned.name(),
        "reduction": "t1 -> support lower end",
    });
    let mut windows = Vec::new();
    let mut margins = Vec::new();
    for &t2 in t2_grid {
        let past = measures::weighted_past_inaccuracy(pair, t2, cfg)?.value;
        let w = TruncationWindow::new(flo, t2)?;
        let tau = measures::gcm(&pair.actual, &w, cfg)?.value;
        let phi_g = pair.assigned.pdf(t2) / pair.assigned.cdf(t2);
        let f = &pair.actual;
        let g = &pair.assigned;
        let i3 = quad::integrate(
            |x| {
                let fx = f.pdf(x);
                if fx == 0.0 {
                    return 0.0;
                }
                let gx = g.cdf(x);
                x * fx / gx
            },
            flo,
            t2,
            cfg,
        )?;
        if !i3.converged {
            return Ok(LawReport::inconclusive(
                "thm22",
                params,
                format!("x f / G integral did not converge at t2 = {t2}"),
            ));
        }
        let upper = -tau * (phi_g.ln() + 1.0) + g.cdf(t2) / f.cdf(t2) * i3.value;
        windows.push(w);
        margins.push(upper - past);
    }
    Ok(LawReport::bound("thm22", params, windows, margins, BOUND_SLACK))
}
