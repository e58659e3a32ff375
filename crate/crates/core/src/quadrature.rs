//! Uniform periodic quadrature and one-dimensional golden-section search.

use std::f64::consts::{PI, TAU};

/// `M` equally spaced nodes on `[-π, π)`.
pub fn periodic_nodes(points: usize) -> impl ExactSizeIterator<Item = f64> {
    let step = TAU / points as f64;
    (0..points).map(move |k| -PI + step * k as f64)
}

/// `∫_{-π}^{π} f(φ) dφ/2π` by the periodic trapezoid rule on `points` nodes.
///
/// Exact for trigonometric polynomials whose largest frequency is below
/// `points`.
pub fn periodic_mean<T, F>(points: usize, mut f: F) -> T
where
    T: std::iter::Sum<T> + std::ops::Div<f64, Output = T>,
    F: FnMut(f64) -> T,
{
    periodic_nodes(points).map(&mut f).sum::<T>() / points as f64
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` on `[lo, hi]` to a bracket narrower than `tol`.
///
/// Values within `tie` of each other compare equal and the search then
/// moves toward `lo`. Returns `(x, f(x))` for the best point evaluated,
/// preferring the smaller `x` among ties.
pub fn golden_section_min<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, tie: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 + tie {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    let mut points = [(x1, f1), (mid, fm), (x2, f2)];
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points
        .into_iter()
        .reduce(|best, cand| if cand.1 < best.1 - tie { cand } else { best })
        .expect("three candidates")
}
