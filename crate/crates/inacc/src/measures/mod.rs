//! Information functionals on (actual, assigned) pairs of lifetime
//! distributions: Kerridge/Nath inaccuracy, its weighted (length-biased)
//! version, the doubly truncated interval forms, one-sided residual/past
//! forms, and the conditional moments (GFR, GCM, geometric vitality) that
//! the bound and characterization results are stated in.
//!
//! Where a worked closed form exists for a (family pair, functional)
//! combination it is registered in [`closed`] and used on the `Auto` route;
//! everything else evaluates by adaptive quadrature.

mod closed;

use serde::Serialize;

use crate::dist::{Distribution, ModelPair, TruncationWindow};
use crate::error::{Error, Result};
use crate::quad::{self, QuadratureConfig};

/// How a [`MeasureValue`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

/// Evaluation route selection: `Auto` prefers a registered closed form,
/// `ForceQuadrature` always uses the integration engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Auto,
    ForceQuadrature,
}

/// A computed functional value with its provenance and error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub window: Option<TruncationWindow>,
    /// False when the quadrature engine exhausted its budget; the value is
    /// then a best effort, not a certified one.
    pub converged: bool,
}

impl MeasureValue {
    fn closed(value: f64, window: Option<TruncationWindow>) -> Self {
        MeasureValue {
            value,
            method: Method::ClosedForm,
            error_estimate: 0.0,
            window,
            converged: true,
        }
    }

    fn quadrature(value: f64, error_estimate: f64, converged: bool, window: Option<TruncationWindow>) -> Self {
        MeasureValue {
            value,
            method: Method::Quadrature,
            error_estimate,
            converged,
            window,
        }
    }
}

/// Windows narrower than this are rejected rather than extrapolated.
pub const MIN_WINDOW_WIDTH: f64 = 1e-10;

fn require_member(pair: &ModelPair, w: &TruncationWindow) -> Result<()> {
    if w.t2.is_finite() && w.width() < MIN_WINDOW_WIDTH {
        return Err(Error::domain(format!(
            "window ({}, {}) is degenerate (width < {MIN_WINDOW_WIDTH})",
            w.t1, w.t2
        )));
    }
    let report = pair.validate_window(w);
    if !report.member {
        return Err(Error::domain(format!(
            "window ({}, {}) is not in D: F(t1)={}, F(t2)={}, G(t1)={}, G(t2)={}",
            w.t1, w.t2, report.f_t1, report.f_t2, report.g_t1, report.g_t2
        )));
    }
    Ok(())
}

// Interior support endpoints of either distribution are integrand kinks;
// hand them to the engine as split points.
fn support_splits(pair: &ModelPair, a: f64, b: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    for d in [&pair.actual, &pair.assigned] {
        let (lo, hi) = d.support();
        if lo > a && lo < b {
            pts.push(lo);
        }
        if hi.is_finite() && hi > a && hi < b {
            pts.push(hi);
        }
    }
    pts
}

/// Core integral
///   -(1/norm_f) * \int_a^b w(x) f(x) [ln g(x) - ln_norm_g] dx
/// with w(x) = x for the weighted variant and 1 otherwise. The integration
/// range is clipped to the support of `f` (the integrand vanishes outside).
fn inaccuracy_integral(
    pair: &ModelPair,
    a: f64,
    b: f64,
    norm_f: f64,
    ln_norm_g: f64,
    weighted: bool,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64, bool)> {
    let (flo, fhi) = pair.actual.support();
    let a = a.max(flo);
    let b = b.min(fhi);
    if !(a < b) {
        return Ok((0.0, 0.0, true));
    }
    let f = &pair.actual;
    let g = &pair.assigned;
    let integrand = move |x: f64| -> f64 {
        let fx = f.pdf(x);
        if fx == 0.0 {
            return 0.0;
        }
        let lg = match g.log_pdf(x) {
            Ok(v) => v,
            // assigned density vanishes where the actual has mass
            Err(_) => return f64::INFINITY,
        };
        let w = if weighted { x } else { 1.0 };
        -w * fx * (lg - ln_norm_g)
    };
    let splits = support_splits(pair, a, b);
    let r = quad::integrate_split(integrand, a, b, &splits, cfg).map_err(|e| match e {
        Error::NonFiniteIntegrand { x } => Error::divergence(format!(
            "assigned density vanishes (or integrand blows up) at x = {x} inside the window"
        )),
        other => other,
    })?;
    Ok((r.value / norm_f, r.error_estimate / norm_f.abs(), r.converged))
}

fn truncated_inaccuracy(
    pair: &ModelPair,
    w: &TruncationWindow,
    weighted: bool,
    cfg: &QuadratureConfig,
) -> Result<MeasureValue> {
    require_member(pair, w)?;
    let df = pair.actual.cdf(w.t2) - pair.actual.cdf(w.t1);
    let dg = pair.assigned.cdf(w.t2) - pair.assigned.cdf(w.t1);
    if dg / df.max(f64::MIN_POSITIVE) < 1e-300 {
        return Err(Error::divergence(format!(
            "assigned probability mass on ({}, {}) underflows relative to the actual mass",
            w.t1, w.t2
        )));
    }
    let (value, err, converged) = inaccuracy_integral(pair, w.t1, w.t2, df, dg.ln(), weighted, cfg)?;
    Ok(MeasureValue::quadrature(value, err, converged, Some(*w)))
}

/// Interval inaccuracy over `(t1, t2)`, the unweighted doubly truncated
/// measure. With `assigned = actual` this is the doubly truncated entropy.
pub fn interval_inaccuracy(pair: &ModelPair, w: &TruncationWindow, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    interval_inaccuracy_via(pair, w, cfg, Route::Auto)
}

pub fn interval_inaccuracy_via(
    pair: &ModelPair,
    w: &TruncationWindow,
    cfg: &QuadratureConfig,
    route: Route,
) -> Result<MeasureValue> {
    if route == Route::Auto {
        if let Some(v) = closed::interval_inaccuracy(pair, w) {
            require_member(pair, w)?;
            return Ok(MeasureValue::closed(v, Some(*w)));
        }
    }
    truncated_inaccuracy(pair, w, false, cfg)
}

/// Weighted interval inaccuracy over `(t1, t2)` — the integrand carries the
/// length-biasing factor x.
pub fn weighted_interval_inaccuracy(
    pair: &ModelPair,
    w: &TruncationWindow,
    cfg: &QuadratureConfig,
) -> Result<MeasureValue> {
    weighted_interval_inaccuracy_via(pair, w, cfg, Route::Auto)
}

pub fn weighted_interval_inaccuracy_via(
    pair: &ModelPair,
    w: &TruncationWindow,
    cfg: &QuadratureConfig,
    route: Route,
) -> Result<MeasureValue> {
    if route == Route::Auto {
        if let Some(v) = closed::weighted_interval_inaccuracy(pair, w) {
            require_member(pair, w)?;
            return Ok(MeasureValue::closed(v, Some(*w)));
        }
    }
    truncated_inaccuracy(pair, w, true, cfg)
}

/// Weighted residual inaccuracy at `t`: the window is `(t, hi)` and the
/// normalizers are the survival functions at `t`.
pub fn weighted_residual_inaccuracy(pair: &ModelPair, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let (_, fhi) = pair.actual.support();
    let sf_f = pair.actual.sf(t);
    let sf_g = pair.assigned.sf(t);
    if sf_f <= 0.0 {
        return Err(Error::domain(format!(
            "residual inaccuracy: survival of the actual law vanishes at t = {t}"
        )));
    }
    if sf_g <= 0.0 {
        return Err(Error::domain(format!(
            "residual inaccuracy: survival of the assigned law vanishes at t = {t}"
        )));
    }
    let (value, err, converged) = inaccuracy_integral(pair, t, fhi, sf_f, sf_g.ln(), true, cfg)?;
    Ok(MeasureValue::quadrature(value, err, converged, None))
}

/// Weighted past inaccuracy at `t`: window `(lo, t)`, CDF normalizers.
pub fn weighted_past_inaccuracy(pair: &ModelPair, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let (flo, _) = pair.actual.support();
    let cdf_f = pair.actual.cdf(t);
    let cdf_g = pair.assigned.cdf(t);
    if cdf_f <= 0.0 {
        return Err(Error::domain(format!(
            "past inaccuracy: F(t) = 0 at t = {t} (at or below the support lower end)"
        )));
    }
    if cdf_g <= 0.0 {
        return Err(Error::domain(format!("past inaccuracy: G(t) = 0 at t = {t}")));
    }
    let (value, err, converged) = inaccuracy_integral(pair, flo, t, cdf_f, cdf_g.ln(), true, cfg)?;
    Ok(MeasureValue::quadrature(value, err, converged, None))
}

/// Weighted inaccuracy over the whole support. With `assigned = actual`
/// this is the weighted entropy.
pub fn weighted_inaccuracy(pair: &ModelPair, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    full_inaccuracy(pair, true, cfg)
}

/// Unweighted inaccuracy over the whole support (differential entropy when
/// `assigned = actual`).
pub fn inaccuracy(pair: &ModelPair, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    full_inaccuracy(pair, false, cfg)
}

fn full_inaccuracy(pair: &ModelPair, weighted: bool, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let (flo, fhi) = pair.actual.support();
    let (value, err, converged) = inaccuracy_integral(pair, flo, fhi, 1.0, 0.0, weighted, cfg)?;
    Ok(MeasureValue::quadrature(value, err, converged, None))
}

/// Discrete Kerridge inaccuracy `-sum p_i ln q_i`.
pub fn discrete_inaccuracy(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::parameter(
            "q",
            format!("length mismatch: p has {}, q has {}", p.len(), q.len()),
        ));
    }
    for (name, v) in [("p", p), ("q", q)] {
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::parameter("p", format!("entries of {name} must be >= 0")));
        }
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::parameter("p", format!("{name} sums to {s}, expected 1")));
        }
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::divergence(
                "q_i = 0 where p_i > 0: inaccuracy diverges".to_string(),
            ));
        }
        acc -= pi * qi.ln();
    }
    Ok(acc)
}

/// General failure rate pair of the doubly truncated law:
/// `h1 = f(t1)/(F(t2)-F(t1))`, `h2 = f(t2)/(F(t2)-F(t1))`.
pub fn gfr(dist: &Distribution, w: &TruncationWindow) -> Result<(f64, f64)> {
    let df = dist.cdf(w.t2) - dist.cdf(w.t1);
    if df <= 0.0 {
        return Err(Error::domain(format!(
            "GFR: F({}) = F({}), zero probability mass on the window",
            w.t1, w.t2
        )));
    }
    let f1 = dist.pdf(w.t1);
    let f2 = if w.t2.is_finite() { dist.pdf(w.t2) } else { 0.0 };
    Ok((f1 / df, f2 / df))
}

/// E[k(X) | t1 < X < t2] by quadrature.
fn conditional_expectation<K: Fn(f64) -> f64>(
    dist: &Distribution,
    w: &TruncationWindow,
    kernel: K,
    cfg: &QuadratureConfig,
) -> Result<MeasureValue> {
    let df = dist.cdf(w.t2) - dist.cdf(w.t1);
    if df <= 0.0 {
        return Err(Error::domain(format!(
            "conditional expectation: zero probability mass on ({}, {})",
            w.t1, w.t2
        )));
    }
    let (lo, hi) = dist.support();
    let a = w.t1.max(lo);
    let b = w.t2.min(hi);
    let r = quad::integrate(
        |x| {
            let fx = dist.pdf(x);
            if fx == 0.0 {
                0.0
            } else {
                kernel(x) * fx
            }
        },
        a,
        b,
        cfg,
    )?;
    Ok(MeasureValue::quadrature(r.value / df, r.error_estimate / df, r.converged, Some(*w)))
}

/// General conditional mean `m_X(t1, t2) = E(X | t1 < X < t2)`.
pub fn gcm(dist: &Distribution, w: &TruncationWindow, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    gcm_via(dist, w, cfg, Route::Auto)
}

pub fn gcm_via(
    dist: &Distribution,
    w: &TruncationWindow,
    cfg: &QuadratureConfig,
    route: Route,
) -> Result<MeasureValue> {
    if route == Route::Auto {
        if let Some(v) = closed::gcm(dist, w) {
            return Ok(MeasureValue::closed(v, Some(*w)));
        }
    }
    conditional_expectation(dist, w, |x| x, cfg)
}

/// `E[X ln(X - shift) | t1 < X < t2]`; `shift = 0` gives the weighted
/// geometric vitality.
pub fn weighted_log_moment(
    dist: &Distribution,
    w: &TruncationWindow,
    shift: f64,
    cfg: &QuadratureConfig,
) -> Result<MeasureValue> {
    if !(w.t1 > shift) {
        return Err(Error::domain(format!(
            "weighted log moment: need t1 > shift, got t1 = {}, shift = {shift}",
            w.t1
        )));
    }
    conditional_expectation(dist, w, |x| x * (x - shift).ln(), cfg)
}

/// Geometric vitality `E(ln X | t1 < X < t2)`.
pub fn geometric_vitality(dist: &Distribution, w: &TruncationWindow, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    if !(w.t1 > 0.0) {
        return Err(Error::domain(format!(
            "geometric vitality: need t1 > 0, got t1 = {}",
            w.t1
        )));
    }
    conditional_expectation(dist, w, |x| x.ln(), cfg)
}

/// Conditional power moment `E(X^k | t1 < X < t2)`.
pub fn conditional_power_moment(
    dist: &Distribution,
    w: &TruncationWindow,
    exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<MeasureValue> {
    conditional_expectation(dist, w, |x| x.powf(exponent), cfg)
}

/// Mean `E(X)`; errs on families with an infinite mean.
pub fn mean(dist: &Distribution, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    if !dist.has_finite_mean() {
        return Err(Error::domain(format!("{} has an infinite mean", dist.name())));
    }
    let (lo, hi) = dist.support();
    let r = quad::integrate(|x| x * dist.pdf(x), lo, hi, cfg)?;
    Ok(MeasureValue::quadrature(r.value, r.error_estimate, r.converged, None))
}

/// Length-biased CDF `F*(t) = E[X 1{X <= t}] / E[X]`.
pub fn length_biased_cdf(dist: &Distribution, t: f64, cfg: &QuadratureConfig) -> Result<MeasureValue> {
    let m = mean(dist, cfg)?;
    let (lo, hi) = dist.support();
    if t <= lo {
        return Ok(MeasureValue::quadrature(0.0, 0.0, true, None));
    }
    if t >= hi {
        return Ok(MeasureValue::quadrature(1.0, m.error_estimate / m.value, true, None));
    }
    let r = quad::integrate(|x| x * dist.pdf(x), lo, t, cfg)?;
    Ok(MeasureValue::quadrature(
        r.value / m.value,
        (r.error_estimate + r.value.abs() / m.value * m.error_estimate) / m.value,
        r.converged && m.converged,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn win(t1: f64, t2: f64) -> TruncationWindow {
        TruncationWindow::new(t1, t2).unwrap()
    }

    #[test]
    fn truncated_uniform_entropy() {
        // X = Y = U(0,1), H(0.2, 0.8) = ln 0.6
        let pair = ModelPair::self_pair(Distribution::uniform(0.0, 1.0).unwrap());
        let h = interval_inaccuracy(&pair, &win(0.2, 0.8), &cfg()).unwrap();
        assert!((h.value - 0.6f64.ln()).abs() < 1e-9);
        // full window: ln 1 = 0
        let h = interval_inaccuracy(&pair, &win(0.0, 1.0), &cfg()).unwrap();
        assert!(h.value.abs() < 1e-10);
    }

    #[test]
    fn window_not_in_domain_is_rejected() {
        let pair = ModelPair::new(
            Distribution::uniform(0.0, 1.0).unwrap(),
            Distribution::uniform(0.0, 3.0).unwrap(),
        )
        .unwrap();
        let err = interval_inaccuracy(&pair, &win(1.2, 1.8), &cfg());
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn vanishing_assigned_density_diverges() {
        // Y has no mass on (0.5, 1): f > 0 there, g = 0
        let pair = ModelPair::new(
            Distribution::uniform(0.0, 2.0).unwrap(),
            Distribution::uniform(1.0, 2.0).unwrap(),
        )
        .unwrap();
        let err = weighted_interval_inaccuracy_via(&pair, &win(0.5, 1.5), &cfg(), Route::ForceQuadrature);
        assert!(matches!(err, Err(Error::Divergence(_))));
    }

    #[test]
    fn degenerate_window_is_rejected() {
        let pair = ModelPair::self_pair(Distribution::uniform(0.0, 1.0).unwrap());
        let err = interval_inaccuracy(&pair, &win(0.5, 0.5 + 1e-12), &cfg());
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn discrete_examples() {
        let v = discrete_inaccuracy(&[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);
        let v = discrete_inaccuracy(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);
        let v = discrete_inaccuracy(&[0.25, 0.75], &[0.75, 0.25]).unwrap();
        let expect = -0.25 * 0.75f64.ln() - 0.75 * 0.25f64.ln();
        assert!((v - expect).abs() < 1e-12);
        assert!(matches!(
            discrete_inaccuracy(&[0.5, 0.5], &[1.0, 0.0]),
            Err(Error::Divergence(_))
        ));
        assert!(matches!(
            discrete_inaccuracy(&[0.5, 0.5], &[1.0]),
            Err(Error::Parameter { .. })
        ));
    }

    #[test]
    fn gfr_uniform_and_pareto() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let (h1, h2) = gfr(&u, &win(0.2, 0.8)).unwrap();
        assert!((h1 - 1.0 / 0.6).abs() < 1e-12);
        assert!((h2 - 1.0 / 0.6).abs() < 1e-12);

        // Pareto-I with G(t) = 1 - 1/t: h1 = t2 / (t1 (t2 - t1))
        let p = Distribution::pareto1(1.0, 1.0).unwrap();
        let (t1, t2) = (1.5, 4.0);
        let (h1, _) = gfr(&p, &win(t1, t2)).unwrap();
        assert!((h1 - t2 / (t1 * (t2 - t1))).abs() < 1e-12);
    }

    #[test]
    fn length_biased_cdf_examples() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let v = length_biased_cdf(&u, 0.5, &cfg()).unwrap();
        assert!((v.value - 0.25).abs() < 1e-9);

        let e = Distribution::exponential(1.0).unwrap();
        let v = length_biased_cdf(&e, 1.0, &cfg()).unwrap();
        assert!((v.value - (1.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-9);

        let heavy = Distribution::pareto1(0.8, 1.0).unwrap();
        assert!(matches!(length_biased_cdf(&heavy, 2.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn conditional_moment_edges() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        // E(X^2 | 0 < X < 1) = 1/3
        let v = conditional_power_moment(&u, &win(0.0, 1.0), 2.0, &cfg()).unwrap();
        assert!((v.value - 1.0 / 3.0).abs() < 1e-10);
        // exponent 1 reduces to the GCM
        let a = conditional_power_moment(&u, &win(0.2, 0.9), 1.0, &cfg()).unwrap();
        let b = gcm_via(&u, &win(0.2, 0.9), &cfg(), Route::ForceQuadrature).unwrap();
        assert!((a.value - b.value).abs() < 1e-10);
        // geometric vitality needs t1 > 0
        assert!(matches!(
            geometric_vitality(&u, &win(0.0, 0.5), &cfg()),
            Err(Error::Domain(_))
        ));
        // weighted log moment needs t1 > shift
        assert!(matches!(
            weighted_log_moment(&u, &win(0.3, 0.5), 0.3, &cfg()),
            Err(Error::Domain(_))
        ));
    }
}
