//! Regularized incomplete gamma functions.
//!
//! `P(a, x) = γ(a, x) / Γ(a)` and `Q(a, x) = 1 − P(a, x)`. The series
//! expansion is used for `x < a + 1` and a modified-Lentz continued fraction
//! otherwise, so whichever of `P` and `Q` is small is computed directly
//! without cancellation.

const MAX_ITER: usize = 1000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Lower regularized incomplete gamma `P(a, x)`. Requires `a > 0`, `x ≥ 0`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        series(a, x)
    } else {
        1.0 - continued_fraction(a, x)
    }
}

/// Upper regularized incomplete gamma `Q(a, x)`. Requires `a > 0`, `x ≥ 0`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - series(a, x)
    } else {
        continued_fraction(a, x)
    }
}

/// `ln Γ(a)` for `a > 0`.
pub fn ln_gamma(a: f64) -> f64 {
    libm::lgamma(a)
}

// x^a e^{-x} / Γ(a), computed in log space.
fn prefactor(a: f64, x: f64) -> f64 {
    libm::exp(a * libm::log(x) - x - ln_gamma(a))
}

fn series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * prefactor(a, x)
}

fn continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    prefactor(a, x) * h
}
