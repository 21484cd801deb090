//! Sufficient conditions for existence and ordering of the two-class
//! premium equilibrium.
//!
//! Every checker is advisory: a failed condition says nothing about whether
//! an equilibrium exists, and the solver never consults these reports.
//!
//! Densities use the absorbed-weight convention `f_L = (1 − p₀)·g` where `g`
//! is the density of the positive part, so `F_L' = f_L` on `(0, ∞)`. The
//! log-slope `f_L'/f_L` does not depend on `p₀`.
//!
//! For Gamma positive parts all suprema come from closed-form candidate
//! sets (interval endpoints plus the relevant stationary point). Other laws
//! fall back to a [`FALLBACK_SCAN_POINTS`]-point uniform scan over the
//! interval, with the endpoints and the mode added as candidates.

use alloc::vec::Vec;
use core::fmt;

use crate::duopoly::DuopolyParams;
use crate::loss::{MixedLoss, PositiveLaw};
use crate::{Error, Result};

pub const FALLBACK_SCAN_POINTS: usize = 4096;
/// Resolution of the `ℓ·f_L(ℓ)` scan in [`check_prop41`].
pub const PROP41_SCAN_POINTS: usize = 1024;

/// `I_L = [δ(κ − 1)E[L], δ(κ − 1)M/κ]`, the range of barriers reachable with
/// premiums in `[E[L], M/κ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossInterval {
    pub lo: f64,
    pub hi: f64,
}

impl LossInterval {
    pub fn for_params(p: &DuopolyParams) -> Self {
        let scale = p.delta() * (p.kappa() - 1.0);
        Self { lo: scale * p.loss().mean(), hi: scale * p.cap() / p.kappa() }
    }

    /// Empty when `M < κE[L]`; suprema over it are then `NaN` and the
    /// conditions that use them hold vacuously.
    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn sup_over<F: Fn(f64) -> f64>(&self, f: F, candidates: &[f64], scan_points: usize) -> f64 {
        if self.is_empty() {
            return f64::NAN;
        }
        let mut best = f(self.lo).max(f(self.hi));
        for &c in candidates {
            if self.contains(c) {
                best = best.max(f(c));
            }
        }
        if scan_points >= 2 {
            let step = (self.hi - self.lo) / (scan_points - 1) as f64;
            for k in 1..scan_points - 1 {
                best = best.max(f(self.lo + step * k as f64));
            }
        }
        best
    }
}

/// The constants `A₁, A₂, m₁, m₂` of the existence theorem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqmConstants {
    pub a1: f64,
    pub a2: f64,
    pub m1: f64,
    pub m2: f64,
}

impl EqmConstants {
    pub fn compute(delta: f64, k1: f64, k2: f64, kappa: f64) -> Self {
        let a1 = k2 * (2.0 - delta * k2) / (2.0 - k2);
        let a2 = (1.0 - k2) * (2.0 - delta * (1.0 - k2)) / (1.0 + k2);
        let scale = delta * (kappa - 1.0) * (kappa - 1.0);
        let m1 = k1 / (scale * k2 * (2.0 * a1).max(2.0 * delta - a1));
        let m2 = k1 / (scale * (1.0 - k2) * (2.0 * a2).max(2.0 * delta - a2));
        Self { a1, a2, m1, m2 }
    }

    pub fn for_params(p: &DuopolyParams) -> Self {
        Self::compute(p.delta(), p.k1(), p.k2(), p.kappa())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
}

impl Bound {
    fn admits(self, x: f64) -> bool {
        match self {
            Bound::AtMost(b) => x <= b,
            Bound::AtLeast(b) => x >= b,
            Bound::Within(lo, hi) => x >= lo && x <= hi,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(b) => write!(f, "<= {b}"),
            Bound::AtLeast(b) => write!(f, ">= {b}"),
            Bound::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub lhs: f64,
    pub bound: Bound,
    pub holds: bool,
}

impl Check {
    fn new(name: &'static str, lhs: f64, bound: Bound) -> Self {
        // NaN only arises from an empty interval: vacuous
        let holds = lhs.is_nan() || bound.admits(lhs);
        Self { name, lhs, bound, holds }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub title: &'static str,
    pub interval: LossInterval,
    /// Named intermediate quantities in evaluation order.
    pub quantities: Vec<(&'static str, f64)>,
    pub checks: Vec<Check>,
}

impl ConditionReport {
    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.0 == name).map(|q| q.1)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        writeln!(f, "  I_L = [{}, {}]", self.interval.lo, self.interval.hi)?;
        for (name, v) in &self.quantities {
            writeln!(f, "  {name} = {v}")?;
        }
        for c in &self.checks {
            let verdict = if c.holds { "holds" } else { "FAILS" };
            writeln!(f, "  {}: {} {} -> {verdict}", c.name, c.lhs, c.bound)?;
        }
        write!(f, "  overall: {}", if self.overall() { "holds" } else { "FAILS" })
    }
}

fn mode_candidates(loss: &MixedLoss) -> Vec<f64> {
    loss.mode().into_iter().collect()
}

fn sup_log_slope(loss: &MixedLoss, i: &LossInterval) -> f64 {
    match loss.positive() {
        // (α − 1)/ℓ − λ is monotone, so an endpoint attains the supremum
        PositiveLaw::Gamma { .. } => i.sup_over(|x| loss.log_pdf_derivative_unchecked(x), &[], 0),
        _ => i.sup_over(|x| loss.log_pdf_derivative_unchecked(x), &[], FALLBACK_SCAN_POINTS),
    }
}

fn sup_density(loss: &MixedLoss, i: &LossInterval) -> f64 {
    let points = match loss.positive() {
        PositiveLaw::Gamma { .. } => 0,
        _ => FALLBACK_SCAN_POINTS,
    };
    i.sup_over(|x| loss.pdf_unchecked(x), &mode_candidates(loss), points)
}

fn sup_ell_density(loss: &MixedLoss, i: &LossInterval) -> f64 {
    // ℓ·f_L(ℓ) ∝ ℓ^α e^{−λℓ} peaks at α/λ for Gamma laws
    let mut candidates = mode_candidates(loss);
    if let PositiveLaw::Gamma { shape, rate } = loss.positive() {
        candidates.push(shape / rate);
    }
    i.sup_over(|x| x * loss.pdf_unchecked(x), &candidates, PROP41_SCAN_POINTS)
}

/// Conditions (i)–(iii) of the existence theorem.
pub fn check_theorem42(p: &DuopolyParams) -> ConditionReport {
    let interval = LossInterval::for_params(p);
    let c = EqmConstants::for_params(p);
    let (k1, delta, kappa) = (p.k1(), p.delta(), p.kappa());
    let e = core::f64::consts::E;

    let logslope = sup_log_slope(p.loss(), &interval);
    let density = sup_density(p.loss(), &interval);
    let slope_lo = -e * k1 / (2.0 * e - 1.0);
    let slope_hi = k1 / 2.0;
    let m = c.m1.min(c.m2);
    let a = c.a1.min(c.a2);
    let lhs3 = (1.0 - delta) * k1 * p.cap() / kappa;

    ConditionReport {
        title: "existence conditions (i)-(iii)",
        interval,
        quantities: alloc::vec![
            ("A1", c.a1),
            ("A2", c.a2),
            ("m1", c.m1),
            ("m2", c.m2),
            ("sup_logslope", logslope),
            ("sup_density", density),
        ],
        checks: alloc::vec![
            Check::new("(i) sup log-slope", logslope, Bound::Within(slope_lo, slope_hi)),
            Check::new("(ii) sup density", density, Bound::AtMost(m)),
            Check::new("(iii) (1-delta)k1 M/kappa", lhs3, Bound::AtMost(a)),
        ],
    }
}

/// Density condition under which the premium ordering follows the
/// preference parameter `k₂`.
pub fn check_prop41(p: &DuopolyParams) -> ConditionReport {
    let interval = LossInterval::for_params(p);
    let sup = sup_ell_density(p.loss(), &interval);
    let rhs = 1.0 / ((1.0 - p.delta()) * (p.kappa() - 1.0));
    ConditionReport {
        title: "ordering condition",
        interval,
        quantities: alloc::vec![("sup_ell_density", sup), ("bound", rhs)],
        checks: alloc::vec![Check::new("sup l f_L(l)", sup, Bound::AtMost(rhs))],
    }
}

/// Gamma-specific sufficient conditions in terms of `k₁/λ`, together with
/// the premise `M ≤ 3E[L]` under which they were derived.
pub fn check_corollary_b1(p: &DuopolyParams) -> Result<ConditionReport> {
    let PositiveLaw::Gamma { shape: alpha, rate: lambda } = p.loss().positive() else {
        return Err(Error::Unsupported("Gamma-specific conditions need a Gamma positive part"));
    };
    let (k1, delta, kappa, p0) = (p.k1(), p.delta(), p.kappa(), p.loss().p0());
    let c = EqmConstants::for_params(p);
    let ratio = k1 / lambda;
    let t1 = 2.0 - 1.0 / core::f64::consts::E;
    let t2 = 2.0 * ((alpha - 1.0) / (alpha * delta * (kappa - 1.0) * (1.0 - p0)) - 1.0);
    let t3 = 3.0 * (kappa - 1.0);
    let lower = t1.max(t2).max(t3);
    let upper = kappa / (3.0 * alpha * (1.0 - p0) * (1.0 - delta)) * c.a1.min(c.a2);
    let three_mean = 3.0 * p.loss().mean();

    Ok(ConditionReport {
        title: "Gamma sufficient conditions",
        interval: LossInterval::for_params(p),
        quantities: alloc::vec![
            ("k1/lambda", ratio),
            ("2-1/e", t1),
            ("2[(alpha-1)/(alpha delta (kappa-1)(1-p0))-1]", t2),
            ("3(kappa-1)", t3),
            ("lower", lower),
            ("upper", upper),
            ("A1", c.a1),
            ("A2", c.a2),
            ("3E[L]", three_mean),
        ],
        checks: alloc::vec![
            Check::new("(i) k1/lambda lower", ratio, Bound::AtLeast(lower)),
            Check::new("(ii) k1/lambda upper", ratio, Bound::AtMost(upper)),
            Check::new("premise M <= 3E[L]", p.cap(), Bound::AtMost(three_mean)),
        ],
    })
}

/// The four verdicts carried in every sweep row: existence (i), (ii), (iii)
/// and the ordering condition.
pub fn sweep_verdicts(p: &DuopolyParams) -> [bool; 4] {
    let t = check_theorem42(p);
    let o = check_prop41(p);
    [t.checks[0].holds, t.checks[1].holds, t.checks[2].holds, o.checks[0].holds]
}
