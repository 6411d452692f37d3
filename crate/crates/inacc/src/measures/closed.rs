//! Registered closed forms, dispatched per (family pair, functional).
//!
//! Each entry is a worked example with an exact antiderivative; anything
//! not matched here falls back to quadrature. Returning `None` means
//! "no closed form for this combination on this window".

use crate::dist::{Distribution, Kind, ModelPair, TruncationWindow};

fn is_full_window(d1: &Distribution, d2: &Distribution, w: &TruncationWindow) -> bool {
    let (lo1, hi1) = d1.support();
    let (lo2, hi2) = d2.support();
    if !(hi1.is_finite() && hi2.is_finite()) {
        return false;
    }
    let lo = lo1.min(lo2);
    let hi = hi1.max(hi2);
    let eps = 1e-12 * (hi - lo);
    w.t1 <= lo + eps && w.t2 >= hi - eps
}

// Conditional mean of the triangular-up law (density ~ x) on (t1, t2):
// 2 (t1^2 + t1 t2 + t2^2) / (3 (t1 + t2)).
fn tri_up_gcm(t1: f64, t2: f64) -> f64 {
    2.0 * (t1 * t1 + t1 * t2 + t2 * t2) / (3.0 * (t1 + t2))
}

pub(super) fn interval_inaccuracy(pair: &ModelPair, w: &TruncationWindow) -> Option<f64> {
    match (pair.actual.kind(), pair.assigned.kind()) {
        // triangular pair on a common (0, b), full window:
        // H = 3/2 - ln(2/b) in both directions
        (Kind::TriangularUp { b }, Kind::TriangularDown { b: b2 })
        | (Kind::TriangularDown { b }, Kind::TriangularUp { b: b2 })
            if b == b2 && is_full_window(&pair.actual, &pair.assigned, w) =>
        {
            Some(1.5 - (2.0 / b).ln())
        }
        _ => None,
    }
}

pub(super) fn weighted_interval_inaccuracy(pair: &ModelPair, w: &TruncationWindow) -> Option<f64> {
    match (pair.actual.kind(), pair.assigned.kind()) {
        (Kind::TriangularUp { b }, Kind::TriangularDown { b: b2 })
            if b == b2 && is_full_window(&pair.actual, &pair.assigned, w) =>
        {
            // -\int_0^b x (2x/b^2) ln(2(b-x)/b^2) dx = b (11/9 - (2/3) ln(2/b))
            Some(b * (11.0 / 9.0 - 2.0 / 3.0 * (2.0 / b).ln()))
        }
        (Kind::TriangularDown { b }, Kind::TriangularUp { b: b2 })
            if b == b2 && is_full_window(&pair.actual, &pair.assigned, w) =>
        {
            // swapped roles: b (5/18 - (1/3) ln(2/b))
            Some(b * (5.0 / 18.0 - (2.0 / b).ln() / 3.0))
        }
        // X triangular-up, Y uniform: the assigned ratio g/(G(t2)-G(t1))
        // is 1/(t2-t1) on any window inside both supports, so
        // H^w = m_X(t1,t2) ln(t2-t1).
        (Kind::TriangularUp { b }, Kind::Uniform { a: ga, b: gb }) => {
            if w.t1 >= 0.0_f64.max(*ga) && w.t2 <= b.min(*gb) && w.t2.is_finite() {
                Some(tri_up_gcm(w.t1, w.t2) * w.width().ln())
            } else {
                None
            }
        }
        _ => None,
    }
}

pub(super) fn gcm(dist: &Distribution, w: &TruncationWindow) -> Option<f64> {
    match dist.kind() {
        Kind::Uniform { a, b } if w.t1 >= *a && w.t2 <= *b => Some(0.5 * (w.t1 + w.t2)),
        Kind::TriangularUp { b } if w.t1 >= 0.0 && w.t2 <= *b => Some(tri_up_gcm(w.t1, w.t2)),
        _ => None,
    }
}
