//! Bounded scalar maximization: uniform scan followed by golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`, assuming
/// unimodality on the bracket. Stops when the bracket is below `x_tol`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, x_tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= x_tol {
            break;
        }
        if f1 >= f2 {
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
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes `f` on `[lo, hi]`: a `points`-point uniform scan (endpoints
/// included) picks the best cell, golden-section refines inside the two
/// neighbouring cells, and the refined point competes with the scan's best
/// and with both interval endpoints. Ties keep the smaller argument.
pub fn scan_golden_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    debug_assert!(points >= 2);
    if hi <= lo {
        return (lo, f(lo));
    }
    let step = (hi - lo) / (points - 1) as f64;
    let at = |k: usize| if k == points - 1 { hi } else { lo + step * k as f64 };
    let mut best_k = 0;
    let mut best_f = f(lo);
    for k in 1..points {
        let v = f(at(k));
        if v > best_f {
            best_f = v;
            best_k = k;
        }
    }
    let a = at(best_k.saturating_sub(1));
    let b = at((best_k + 1).min(points - 1));
    let x_tol = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
    let (gx, gf) = golden_max(f, a, b, x_tol);

    let mut best = (at(best_k), best_f);
    for cand in [(gx, gf), (lo, f(lo)), (hi, f(hi))] {
        if cand.1 > best.1 || (cand.1 == best.1 && cand.0 < best.0) {
            best = cand;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_quadratic() {
        let f = |x: f64| -(x - 1.234_567).powi(2);
        let (x, _) = scan_golden_max(&f, -5.0, 5.0, 64);
        assert!((x - 1.234_567).abs() < 1e-7);
    }

    #[test]
    fn boundary_maximum_is_exact() {
        let f = |x: f64| x;
        assert_eq!(scan_golden_max(&f, 0.0, 3.0, 16).0, 3.0);
        let g = |x: f64| -x;
        assert_eq!(scan_golden_max(&g, 0.0, 3.0, 16).0, 0.0);
    }

    #[test]
    fn bimodal_picks_global() {
        let f = |x: f64| libm::exp(-(x + 2.0).powi(2)) + 2.0 * libm::exp(-(x - 3.0).powi(2) * 4.0);
        let (x, _) = scan_golden_max(&f, -5.0, 5.0, 128);
        assert!((x - 3.0).abs() < 1e-3);
    }
}
