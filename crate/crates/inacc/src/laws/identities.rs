//! Identity verifiers: the alternative double-integral forms of the
//! weighted interval measure, the endpoint-derivative relations, the
//! one-sided/global limit coherence, and the five-term decomposition of the
//! global weighted inaccuracy.
//!
//! The alternative forms arise from swapping the order of integration in
//! the weighted integral, so the inner object keeps the *outer* window's
//! normalizing constants; the same convention makes the derivative
//! relations exact, and the finite differences here are taken of those
//! window-locked functionals.

use serde_json::json;

use super::{equality_tolerance, LawReport};
use crate::dist::{ModelPair, TruncationWindow};
use crate::error::{Error, Result};
use crate::measures;
use crate::quad::{self, QuadratureConfig};

// -(1/df) \int_a^b [x] f (ln g - ln_dg) dx with the window-locked
// normalizers supplied by the caller.
fn locked_partial(
    pair: &ModelPair,
    a: f64,
    b: f64,
    df: f64,
    ln_dg: f64,
    weighted: bool,
    cfg: &QuadratureConfig,
) -> Result<quad::QuadratureResult> {
    let f = &pair.actual;
    let g = &pair.assigned;
    let mut r = quad::integrate(
        |x| {
            let fx = f.pdf(x);
            if fx == 0.0 {
                return 0.0;
            }
            let lg = match g.log_pdf(x) {
                Ok(v) => v,
                Err(_) => return f64::INFINITY,
            };
            let w = if weighted { x } else { 1.0 };
            -w * fx * (lg - ln_dg)
        },
        a,
        b,
        cfg,
    )?;
    r.value /= df;
    r.error_estimate /= df;
    Ok(r)
}

/// Check the two rewrites of the weighted interval measure obtained by
/// integration-order swap:
///   H^w = t1 H + \int_{t1}^{t2} P(x, t2) dx
///   H^w = t2 H - \int_{t1}^{t2} P(t1, y) dy
/// where `P` is the partial inaccuracy integral with the (t1, t2)-locked
/// normalizers. Returns the two signed residuals and the tolerance.
pub fn check_alternative_forms(
    pair: &ModelPair,
    w: &TruncationWindow,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64, f64)> {
    let hw = measures::weighted_interval_inaccuracy_via(pair, w, cfg, measures::Route::ForceQuadrature)?;
    let h = measures::interval_inaccuracy_via(pair, w, cfg, measures::Route::ForceQuadrature)?;
    let df = pair.actual.cdf(w.t2) - pair.actual.cdf(w.t1);
    let ln_dg = (pair.assigned.cdf(w.t2) - pair.assigned.cdf(w.t1)).ln();

    let inner_cfg = QuadratureConfig {
        abs_tol: (cfg.abs_tol * 0.1).max(1e-13),
        rel_tol: (cfg.rel_tol * 0.1).max(1e-12),
        ..*cfg
    };
    let outer_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol.max(1e-9),
        rel_tol: cfg.rel_tol.max(1e-9),
        ..*cfg
    };

    let tail = quad::integrate(
        |x| locked_partial(pair, x, w.t2, df, ln_dg, false, &inner_cfg).map(|r| r.value).unwrap_or(f64::NAN),
        w.t1,
        w.t2,
        &outer_cfg,
    )?;
    let rhs_tail = w.t1 * h.value + tail.value;

    let head = quad::integrate(
        |y| locked_partial(pair, w.t1, y, df, ln_dg, false, &inner_cfg).map(|r| r.value).unwrap_or(f64::NAN),
        w.t1,
        w.t2,
        &outer_cfg,
    )?;
    let rhs_head = w.t2 * h.value - head.value;

    let tol = equality_tolerance(
        hw.error_estimate
            + (w.t1.abs() + w.t2.abs()) * h.error_estimate
            + tail.error_estimate
            + head.error_estimate,
    );
    Ok((hw.value - rhs_tail, hw.value - rhs_head, tol))
}

/// Check the endpoint-derivative relations
///   d/dt1 H^w = t1 d/dt1 H   and   d/dt2 H^w = t2 d/dt2 H
/// for the window-locked functionals, by central differences with the
/// stated step. Returns the two relative residuals and their tolerance.
pub fn check_derivative_relations(
    pair: &ModelPair,
    w: &TruncationWindow,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64, f64)> {
    const STEP: f64 = 1e-5;
    let df = pair.actual.cdf(w.t2) - pair.actual.cdf(w.t1);
    let ln_dg = (pair.assigned.cdf(w.t2) - pair.assigned.cdf(w.t1)).ln();
    let tight = QuadratureConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-11,
        ..*cfg
    };

    // The central difference of the locked functional collapses to one
    // short integral across the endpoint, which avoids cancellation:
    //   [Hw(s+h) - Hw(s-h)] / 2h = (1/(2h df)) \int_{s-h}^{s+h} x f L dx
    let short = |a: f64, b: f64, weighted: bool| -> Result<f64> {
        let r = locked_partial(pair, a, b, df, ln_dg, weighted, &tight)?;
        Ok(r.value)
    };

    // left endpoint: moving s across t1 gains mass, positive sign
    let d1w = -short(w.t1 - STEP, w.t1 + STEP, true)? / (2.0 * STEP);
    let d1 = -short(w.t1 - STEP, w.t1 + STEP, false)? / (2.0 * STEP);
    // right endpoint: moving s across t2
    let d2w = short(w.t2 - STEP, w.t2 + STEP, true)? / (2.0 * STEP);
    let d2 = short(w.t2 - STEP, w.t2 + STEP, false)? / (2.0 * STEP);

    let r1 = (d1w - w.t1 * d1).abs() / d1w.abs().max(1e-12);
    let r2 = (d2w - w.t2 * d2).abs() / d2w.abs().max(1e-12);
    Ok((r1, r2, 1e-4))
}

/// Limit coherence of the interval measure: squeezing the window against
/// the support ends must reproduce the past, residual and global weighted
/// measures. Returns the three absolute differences.
pub fn check_limits(pair: &ModelPair, t: f64, cfg: &QuadratureConfig) -> Result<[f64; 3]> {
    let (flo, fhi) = pair.actual.support();
    let (_, ghi) = pair.assigned.support();

    let eps_lo = 1e-12 * (t - flo).max(1.0);
    let lo_shrunk = flo + eps_lo;

    let hi_shrunk = if fhi.is_finite() && ghi.is_finite() {
        let hi = fhi.max(ghi);
        hi - 1e-12 * (hi - flo)
    } else {
        // quantile cutoff leaving ~1e-12 of either tail
        pair.actual.quantile(1.0 - 1e-12).max(pair.assigned.quantile(1.0 - 1e-12))
    };

    let past = measures::weighted_past_inaccuracy(pair, t, cfg)?.value;
    let past_lim = measures::weighted_interval_inaccuracy_via(
        pair,
        &TruncationWindow::new(lo_shrunk, t)?,
        cfg,
        measures::Route::ForceQuadrature,
    )?
    .value;

    let resid = measures::weighted_residual_inaccuracy(pair, t, cfg)?.value;
    let resid_lim = measures::weighted_interval_inaccuracy_via(
        pair,
        &TruncationWindow::new(t, hi_shrunk)?,
        cfg,
        measures::Route::ForceQuadrature,
    )?
    .value;

    let full = measures::weighted_inaccuracy(pair, cfg)?.value;
    let full_lim = measures::weighted_interval_inaccuracy_via(
        pair,
        &TruncationWindow::new(lo_shrunk, hi_shrunk)?,
        cfg,
        measures::Route::ForceQuadrature,
    )?
    .value;

    Ok([
        (past_lim - past).abs(),
        (resid_lim - resid).abs(),
        (full_lim - full).abs(),
    ])
}

/// Five-term decomposition of the global weighted inaccuracy into past,
/// interval and residual parts plus the length-biased trivalent term.
/// Returns (residual, tolerance).
pub fn check_decomposition(
    pair: &ModelPair,
    t1: f64,
    t2: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if !pair.actual.has_finite_mean() {
        return Err(Error::domain(format!(
            "decomposition requires a finite mean; {} has none",
            pair.actual.name()
        )));
    }
    if !(t1 < t2) {
        return Err(Error::parameter("t2", format!("need t1 < t2, got ({t1}, {t2})")));
    }
    let f1 = pair.actual.cdf(t1);
    let f2 = pair.actual.cdf(t2);
    let sf2 = pair.actual.sf(t2);
    let g1 = pair.assigned.cdf(t1);
    let g2 = pair.assigned.cdf(t2);
    let sg2 = pair.assigned.sf(t2);

    let past = measures::weighted_past_inaccuracy(pair, t1, cfg)?;
    let interval =
        measures::weighted_interval_inaccuracy_via(pair, &TruncationWindow::new(t1, t2)?, cfg, measures::Route::ForceQuadrature)?;
    let resid = measures::weighted_residual_inaccuracy(pair, t2, cfg)?;
    let ex = measures::mean(&pair.actual, cfg)?;
    let fs1 = measures::length_biased_cdf(&pair.actual, t1, cfg)?;
    let fs2 = measures::length_biased_cdf(&pair.actual, t2, cfg)?;

    let bracket = fs1.value * g1.ln() + (fs2.value - fs1.value) * (g2 - g1).ln() + (1.0 - fs2.value) * sg2.ln();
    let rhs = f1 * past.value + (f2 - f1) * interval.value + sf2 * resid.value - ex.value * bracket;
    let lhs = measures::weighted_inaccuracy(pair, cfg)?;

    let err_sum = lhs.error_estimate
        + past.error_estimate
        + interval.error_estimate
        + resid.error_estimate
        + ex.error_estimate * bracket.abs()
        + ex.value * (fs1.error_estimate + fs2.error_estimate) * (g1.ln().abs() + (g2 - g1).ln().abs() + sg2.ln().abs());
    Ok((lhs.value - rhs, equality_tolerance(err_sum)))
}

/// The two-term `t1 = t2 = t` specialization of the decomposition.
pub fn check_decomposition_degenerate(pair: &ModelPair, t: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    if !pair.actual.has_finite_mean() {
        return Err(Error::domain(format!(
            "decomposition requires a finite mean; {} has none",
            pair.actual.name()
        )));
    }
    let f = pair.actual.cdf(t);
    let sf = pair.actual.sf(t);
    let g = pair.assigned.cdf(t);
    let sg = pair.assigned.sf(t);

    let past = measures::weighted_past_inaccuracy(pair, t, cfg)?;
    let resid = measures::weighted_residual_inaccuracy(pair, t, cfg)?;
    let ex = measures::mean(&pair.actual, cfg)?;
    let fs = measures::length_biased_cdf(&pair.actual, t, cfg)?;

    let bracket = fs.value * g.ln() + (1.0 - fs.value) * sg.ln();
    let rhs = f * past.value + sf * resid.value - ex.value * bracket;
    let lhs = measures::weighted_inaccuracy(pair, cfg)?;

    let err_sum = lhs.error_estimate
        + past.error_estimate
        + resid.error_estimate
        + ex.error_estimate * bracket.abs()
        + ex.value * fs.error_estimate * (g.ln().abs() + sg.ln().abs());
    Ok((lhs.value - rhs, equality_tolerance(err_sum)))
}

/// Report-level wrapper running the decomposition over a window list plus
/// the degenerate specialization at each window midpoint.
pub fn decomposition_report(
    pair: &ModelPair,
    windows: &[TruncationWindow],
    cfg: &QuadratureConfig,
) -> Result<LawReport> {
    let mut residuals = Vec::new();
    let mut tol: f64 = 0.0;
    let mut out_windows = Vec::new();
    for w in windows {
        let (r, t) = check_decomposition(pair, w.t1, w.t2, cfg)?;
        residuals.push(r);
        tol = tol.max(t);
        out_windows.push(*w);
        // degenerate t1 = t2 specialization at the window midpoint
        let mid = 0.5 * (w.t1 + w.t2);
        let (r, t) = check_decomposition_degenerate(pair, mid, cfg)?;
        residuals.push(r);
        tol = tol.max(t);
        out_windows.push(TruncationWindow { t1: mid, t2: mid });
    }
    let params = json!({
        "actual": pair.actual.name(),
        "assigned": pair.assigned.name(),
    });
    Ok(LawReport::equality("decomposition", params, out_windows, residuals, tol))
}
