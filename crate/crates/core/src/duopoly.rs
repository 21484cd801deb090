//! Two-class duopoly with proportional penalty.
//!
//! Company `i` charges `θᵢ` in class 1 and `κθᵢ` in class 2. The insured's
//! optimal barrier is the same in all four states and has a closed form,
//! the induced chain has a product-form stationary law, and each insurer's
//! long-run per-period profit is a smooth function of its own premium on
//! either side of the kink `θ₁ = θ₂`. Best responses maximize that profit
//! branch by branch; the equilibrium is found by damped simultaneous
//! best-response iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bms::{BarrierPolicy, ChoiceFunction, MarketModel, SwitchClassConvention};
use crate::loss::MixedLoss;
use crate::optimize::{golden_max, scan_golden_max};
use crate::{Error, Result};

/// Scan resolution per branch used by [`DuopolyParams::best_response`].
pub const SCAN_POINTS: usize = 512;
/// Branch maxima closer than this are treated as tied.
const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Company {
    One,
    Two,
}

impl Company {
    pub fn index(self) -> usize {
        match self {
            Company::One => 0,
            Company::Two => 1,
        }
    }

    pub fn other(self) -> Company {
        match self {
            Company::One => Company::Two,
            Company::Two => Company::One,
        }
    }
}

/// Upper end of the admissible class-1 premium set `Θ = [E[L], upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaBound {
    /// `upper = M`.
    #[default]
    CapM,
    /// `upper = M/κ`, so that class-2 premiums also respect the cap.
    CapMOverKappa,
}

/// Side of the kink `θ_own = θ_opponent` for one-sided derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Own premium below the opponent's.
    Below,
    /// Own premium above the opponent's.
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuopolyParams {
    theta1: f64,
    theta2: f64,
    kappa: f64,
    delta: f64,
    k1: f64,
    k2: f64,
    cap: f64,
    loss: MixedLoss,
    theta_bound: ThetaBound,
}

/// Quantities shared by every profit functional at one premium pair.
#[derive(Debug, Clone, Copy)]
struct PointEval {
    /// Probability of choosing Company 1, `η(θ₂ − θ₁)`.
    p1: f64,
    barrier: f64,
    /// `P(L ≤ b*)`.
    a: f64,
    /// `E[L·1{L > b*}]`.
    tail: f64,
}

impl DuopolyParams {
    /// Validates every parameter. Premiums start at `θ₁ = θ₂ = E[L]`; use
    /// [`DuopolyParams::with_premiums`] to place them.
    pub fn new(
        kappa: f64,
        delta: f64,
        k1: f64,
        k2: f64,
        cap: f64,
        loss: MixedLoss,
        theta_bound: ThetaBound,
    ) -> Result<Self> {
        if !(kappa > 1.0 && kappa < 2.0) {
            return Err(Error::InvalidParameter { name: "kappa", value: kappa, expected: "(1, 2)" });
        }
        if !(delta > 0.0 && delta <= crate::bms::MAX_DELTA + 1e-15) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                expected: "(0, 1 - 1e-6]",
            });
        }
        ChoiceFunction::exponential(k1, k2)?;
        let mean = loss.mean();
        let p = Self {
            theta1: mean,
            theta2: mean,
            kappa,
            delta,
            k1,
            k2,
            cap,
            loss,
            theta_bound,
        };
        if !(p.upper() >= mean) || !cap.is_finite() {
            return Err(Error::InvalidParameter {
                name: "M",
                value: cap,
                expected: "an upper premium bound at or above E[L]",
            });
        }
        Ok(p)
    }

    /// Same parameters at premiums `(θ₁, θ₂)`, both required to lie in `Θ`.
    pub fn with_premiums(&self, theta1: f64, theta2: f64) -> Result<Self> {
        let (lo, hi) = self.theta_range();
        for (name, t) in [("theta1", theta1), ("theta2", theta2)] {
            if !(t >= lo && t <= hi) {
                return Err(Error::InvalidParameter { name, value: t, expected: "Theta = [E[L], upper]" });
            }
        }
        Ok(Self { theta1, theta2, ..self.clone() })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }
    pub fn theta2(&self) -> f64 {
        self.theta2
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn k1(&self) -> f64 {
        self.k1
    }
    pub fn k2(&self) -> f64 {
        self.k2
    }
    pub fn cap(&self) -> f64 {
        self.cap
    }
    pub fn loss(&self) -> &MixedLoss {
        &self.loss
    }
    pub fn theta_bound(&self) -> ThetaBound {
        self.theta_bound
    }

    pub fn theta(&self, company: Company) -> f64 {
        match company {
            Company::One => self.theta1,
            Company::Two => self.theta2,
        }
    }

    fn upper(&self) -> f64 {
        match self.theta_bound {
            ThetaBound::CapM => self.cap,
            ThetaBound::CapMOverKappa => self.cap / self.kappa,
        }
    }

    /// `Θ = [E[L], upper]`.
    pub fn theta_range(&self) -> (f64, f64) {
        (self.loss.mean(), self.upper())
    }

    pub fn choice(&self) -> ChoiceFunction {
        ChoiceFunction::Exponential { k1: self.k1, k2: self.k2 }
    }

    /// The general N = 2 market with schedules `(θᵢ, κθᵢ)`.
    pub fn market_model(&self) -> Result<MarketModel> {
        MarketModel::new(
            [
                alloc::vec![self.theta1, self.kappa * self.theta1].into(),
                alloc::vec![self.theta2, self.kappa * self.theta2].into(),
            ],
            self.choice(),
            self.delta,
            self.loss,
        )
        .map(|m| m.with_convention(SwitchClassConvention::Down))
    }

    /// Probability of choosing Company 1 at the current premiums.
    pub fn prob_company_one(&self) -> f64 {
        self.choice().prob_company_one(self.theta2 - self.theta1)
    }

    fn barrier_at(&self, p1: f64, t1: f64, t2: f64) -> f64 {
        self.delta * (self.kappa - 1.0) * (p1 * t1 + (1.0 - p1) * t2)
    }

    fn eval(&self, t1: f64, t2: f64) -> PointEval {
        let p1 = self.choice().prob_company_one(t2 - t1);
        let barrier = self.barrier_at(p1, t1, t2);
        PointEval {
            p1,
            barrier,
            a: self.loss.cdf_unchecked(barrier),
            tail: self.loss.tail_unchecked(barrier),
        }
    }

    /// `b* = δ(κ − 1)[η·θ₁ + (1 − η)·θ₂]` with `η = η(θ₂ − θ₁)`.
    pub fn closed_form_barrier(&self) -> f64 {
        self.barrier_at(self.prob_company_one(), self.theta1, self.theta2)
    }

    /// Stationary law over `s₁ = (1,1), s₂ = (2,1), s₃ = (1,2), s₄ = (2,2)`,
    /// solved from the transition matrix under the closed-form barrier.
    pub fn stationary_distribution(&self) -> Result<StationaryDistribution> {
        let model = self.market_model()?;
        let policy = BarrierPolicy::uniform(2, self.closed_form_barrier())?;
        let t = model.transition_matrix(&policy)?;
        let p = t.stationary_distribution()?;
        let residual = t.stationarity_residual(&p);
        Ok(StationaryDistribution { p: [p[0], p[1], p[2], p[3]], residual })
    }

    /// `Σₙ (cₙⁱ − E[L·1{L > b*}])·p(n, i)` from the solved stationary law.
    pub fn expected_profit(&self, company: Company) -> Result<f64> {
        let dist = self.stationary_distribution()?;
        let tail = self.loss.tail_unchecked(self.closed_form_barrier());
        let theta = self.theta(company);
        let (good, bad) = match company {
            Company::One => (dist.p[0], dist.p[1]),
            Company::Two => (dist.p[2], dist.p[3]),
        };
        Ok((theta - tail) * good + (self.kappa * theta - tail) * bad)
    }

    /// Closed-form profit `share·(θ[a + κ(1 − a)] − E[L·1{L > b*}])`.
    pub fn reduced_profit(&self, company: Company) -> f64 {
        self.reduced_profit_at(company, self.theta1, self.theta2)
    }

    fn reduced_profit_at(&self, company: Company, t1: f64, t2: f64) -> f64 {
        let e = self.eval(t1, t2);
        let (share, theta) = match company {
            Company::One => (e.p1, t1),
            Company::Two => (1.0 - e.p1, t2),
        };
        share * (theta * (e.a + self.kappa * (1.0 - e.a)) - e.tail)
    }

    /// Analytic `∂Jⁱ/∂θᵢ`. At `θ₁ = θ₂` a side is required unless `k₂ = 1/2`.
    pub fn profit_gradient(&self, company: Company, side: Option<Side>) -> Result<f64> {
        let own = self.theta(company);
        let opp = self.theta(company.other());
        let side = if own < opp {
            Side::Below
        } else if own > opp {
            Side::Above
        } else {
            match side {
                Some(s) => s,
                None if self.k2 == 0.5 => Side::Below,
                None => return Err(Error::AtKink(own)),
            }
        };
        Ok(self.gradient_at(company, self.theta1, self.theta2, side))
    }

    fn gradient_at(&self, company: Company, t1: f64, t2: f64, side: Side) -> f64 {
        let e = self.eval(t1, t2);
        let k1 = self.k1;
        // ∂η/∂θ_own on the requested side
        let dp1 = match (company, side) {
            (Company::One, Side::Below) => -k1 * (1.0 - e.p1),
            (Company::One, Side::Above) => -k1 * e.p1,
            (Company::Two, Side::Below) => k1 * e.p1,
            (Company::Two, Side::Above) => k1 * (1.0 - e.p1),
        };
        let (share, dshare, own_weight, theta) = match company {
            Company::One => (e.p1, dp1, e.p1, t1),
            Company::Two => (1.0 - e.p1, -dp1, 1.0 - e.p1, t2),
        };
        let db = self.delta * (self.kappa - 1.0) * ((t1 - t2) * dp1 + own_weight);
        let q = self.loss.pdf_unchecked(e.barrier) * db;
        let level = e.a + self.kappa * (1.0 - e.a);
        let bracket = theta * level - e.tail;
        let dbracket = level + (theta * (1.0 - self.kappa) + e.barrier) * q;
        dshare * bracket + share * dbracket
    }

    /// Company 1's first-order condition assembled as written for each branch:
    /// `η[a + κ(1−a) + (θ₁(1−κ) + b*)q] − k₁(1−η)B` below the kink and
    /// `a + κ(1−a) + (θ₁(1−κ) + b*)q − k₁B` above it, with
    /// `B = θ₁[a + κ(1−a)] − E[L·1{L > b*}]`. Positive means profit increases.
    pub fn first_order_residual(&self, side: Option<Side>) -> Result<f64> {
        let (t1, t2) = (self.theta1, self.theta2);
        let side = match (t1 < t2, t1 > t2, side) {
            (true, _, _) => Side::Below,
            (_, true, _) => Side::Above,
            (_, _, Some(s)) => s,
            _ => return Err(Error::AtKink(t1)),
        };
        let e = self.eval(t1, t2);
        let (k1, kappa, eta) = (self.k1, self.kappa, e.p1);
        let level = e.a + kappa * (1.0 - e.a);
        let bracket = t1 * level - e.tail;
        let f = self.loss.pdf_unchecked(e.barrier);
        Ok(match side {
            Side::Below => {
                let q = f * self.delta * (kappa - 1.0) * (eta + k1 * (t2 - t1) * (1.0 - eta));
                eta * (level + (t1 * (1.0 - kappa) + e.barrier) * q) - k1 * (1.0 - eta) * bracket
            }
            Side::Above => {
                let q = f * self.delta * (kappa - 1.0) * eta * (1.0 - k1 * (t1 - t2));
                level + (t1 * (1.0 - kappa) + e.barrier) * q - k1 * bracket
            }
        })
    }

    fn profit_of(&self, company: Company, own: f64, opponent: f64) -> f64 {
        match company {
            Company::One => self.reduced_profit_at(company, own, opponent),
            Company::Two => self.reduced_profit_at(company, opponent, own),
        }
    }

    /// Profit-maximizing premium for `company` against `opponent_theta`.
    ///
    /// The objective is smooth on `[lower, opponent]` and `[opponent, upper]`
    /// and kinked between them, so each branch is maximized separately by a
    /// [`SCAN_POINTS`]-point scan, golden-section refinement and, when the
    /// maximum is interior, bisection on the analytic gradient. Branch maxima
    /// within `10⁻¹⁰` of each other resolve to the smaller premium.
    pub fn best_response(&self, company: Company, opponent_theta: f64) -> Result<f64> {
        let (lo, hi) = self.theta_range();
        if !(opponent_theta >= lo && opponent_theta <= hi) {
            return Err(Error::Domain {
                what: "opponent premium",
                value: opponent_theta,
                expected: "Theta",
            });
        }
        Ok(self.best_response_unchecked(company, opponent_theta).0)
    }

    fn best_response_unchecked(&self, company: Company, opp: f64) -> (f64, f64) {
        let (lo, hi) = self.theta_range();
        let below = self.branch_max(company, opp, lo, opp, Side::Below);
        let above = self.branch_max(company, opp, opp, hi, Side::Above);
        if (below.1 - above.1).abs() <= TIE_TOL * (1.0 + below.1.abs().max(above.1.abs())) {
            if below.0 <= above.0 {
                below
            } else {
                above
            }
        } else if below.1 > above.1 {
            below
        } else {
            above
        }
    }

    fn branch_max(&self, company: Company, opp: f64, lo: f64, hi: f64, side: Side) -> (f64, f64) {
        if hi <= lo {
            return (lo, self.profit_of(company, lo, opp));
        }
        let f = |x: f64| self.profit_of(company, x, opp);
        let (x, fx) = scan_golden_max(&f, lo, hi, SCAN_POINTS);
        if x <= lo || x >= hi {
            return (x, fx);
        }
        // polish an interior maximum on the sign change of the gradient
        let grad = |y: f64| match company {
            Company::One => self.gradient_at(company, y, opp, side),
            Company::Two => self.gradient_at(company, opp, y, side),
        };
        let h = (hi - lo) / (SCAN_POINTS - 1) as f64;
        let (mut a, mut b) = ((x - h).max(lo), (x + h).min(hi));
        if grad(a) > 0.0 && grad(b) < 0.0 {
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if grad(m) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            // the profit is flat to rounding here, so the root wins any
            // comparison that is within noise
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm >= fx - 1e-13 * (1.0 + fx.abs()) {
                return (m, fm);
            }
        } else {
            let (gx, gf) = golden_max(&f, a, b, 1e-13 * (1.0 + x.abs()));
            if gf > fx {
                return (gx, gf);
            }
        }
        (x, fx)
    }

    /// Damped simultaneous best-response iteration from the midpoint of `Θ`.
    pub fn nash_equilibrium(&self, options: EquilibriumOptions) -> Result<EquilibriumResult> {
        if !(options.damping > 0.0 && options.damping <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "damping",
                value: options.damping,
                expected: "(0, 1]",
            });
        }
        if !(options.tol > 0.0) {
            return Err(Error::InvalidParameter { name: "tol", value: options.tol, expected: "(0, inf)" });
        }
        let (lo, hi) = self.theta_range();
        let mid = 0.5 * (lo + hi);
        let (mut t1, mut t2) = (mid, mid);
        let mut residual = f64::INFINITY;
        let mut converged = false;
        let mut iterations = 0;
        for it in 1..=options.max_iterations {
            iterations = it;
            let br1 = self.best_response_unchecked(Company::One, t2).0;
            let br2 = self.best_response_unchecked(Company::Two, t1).0;
            residual = (br1 - t1).abs().max((br2 - t2).abs());
            if residual <= options.tol {
                converged = true;
                break;
            }
            let g = options.damping;
            t1 = ((1.0 - g) * t1 + g * br1).clamp(lo, hi);
            t2 = ((1.0 - g) * t2 + g * br2).clamp(lo, hi);
        }
        let at = self.with_premiums(t1, t2)?;
        Ok(EquilibriumResult {
            theta1: t1,
            theta2: t2,
            barrier: at.closed_form_barrier(),
            profits: [at.reduced_profit(Company::One), at.reduced_profit(Company::Two)],
            iterations,
            converged,
            residual,
            ordering: PremiumOrdering::classify(t1, t2),
        })
    }

    /// Simulates one insured through the four-state chain under a common
    /// `barrier`, starting in `(1, 1)`. Standard errors use 100 batch means
    /// (fewer for short horizons; `NaN` when `horizon < 2`).
    pub fn simulate_chain(&self, barrier: f64, horizon: usize, seed: u64) -> Result<SimulationReport> {
        if !(barrier >= 0.0) {
            return Err(Error::Domain { what: "barrier", value: barrier, expected: ">= 0" });
        }
        if horizon == 0 {
            return Err(Error::Domain { what: "horizon", value: 0.0, expected: ">= 1" });
        }
        let model = self.market_model()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampler = self.loss.sampler();
        let batches = horizon.min(100);
        let mut acc = BatchAccumulator::new(batches);

        let (mut class, mut company) = (0usize, 0usize);
        let mut step = 0usize;
        for batch in 0..batches {
            let end = (batch + 1) * horizon / batches;
            let mut counts = [0.0f64; 4];
            let mut profit = [0.0f64; 2];
            let len = (end - step) as f64;
            while step < end {
                let state = model.state_index(class, company);
                counts[state] += 1.0;
                let loss = sampler.draw(&mut rng);
                let claim = if loss > barrier { loss } else { 0.0 };
                profit[company] += model.premium(class, company) - claim;
                let next_class = if loss <= barrier { class.saturating_sub(1) } else { (class + 1).min(1) };
                // N = 2 with the down convention: switching uses the class-1 gap
                let switch = model.switch_probability(company, 0)?;
                if rng.random::<f64>() < switch {
                    company = 1 - company;
                }
                class = next_class;
                step += 1;
            }
            let means = [
                counts[0] / len,
                counts[1] / len,
                counts[2] / len,
                counts[3] / len,
                profit[0] / len,
                profit[1] / len,
            ];
            acc.push(&means, len);
        }
        let (mean, se) = acc.finish(horizon as f64);
        Ok(SimulationReport {
            horizon,
            frequencies: [mean[0], mean[1], mean[2], mean[3]],
            frequency_se: [se[0], se[1], se[2], se[3]],
            profits: [mean[4], mean[5]],
            profit_se: [se[4], se[5]],
        })
    }
}

struct BatchAccumulator {
    batches: usize,
    weighted_sum: [f64; 6],
    sum: [f64; 6],
    sum_sq: [f64; 6],
}

impl BatchAccumulator {
    fn new(batches: usize) -> Self {
        Self { batches, weighted_sum: [0.0; 6], sum: [0.0; 6], sum_sq: [0.0; 6] }
    }

    fn push(&mut self, means: &[f64; 6], len: f64) {
        for k in 0..6 {
            self.weighted_sum[k] += means[k] * len;
            self.sum[k] += means[k];
            self.sum_sq[k] += means[k] * means[k];
        }
    }

    fn finish(&self, total: f64) -> ([f64; 6], [f64; 6]) {
        let b = self.batches as f64;
        let mut mean = [0.0; 6];
        let mut se = [f64::NAN; 6];
        for k in 0..6 {
            mean[k] = self.weighted_sum[k] / total;
            if self.batches >= 2 {
                let m = self.sum[k] / b;
                let var = ((self.sum_sq[k] - b * m * m) / (b - 1.0)).max(0.0);
                se[k] = libm::sqrt(var / b);
            }
        }
        (mean, se)
    }
}

/// Stationary probabilities of `(1,1), (2,1), (1,2), (2,2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryDistribution {
    pub p: [f64; 4],
    /// `‖Tᵀp − p‖_∞` of the solved vector.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumOptions {
    pub tol: f64,
    pub damping: f64,
    pub max_iterations: usize,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        Self { tol: 1e-8, damping: 0.5, max_iterations: 500 }
    }
}

/// Relative order of the two equilibrium premiums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PremiumOrdering {
    /// `|θ₁ − θ₂| ≤ 10⁻⁶`.
    Symmetric,
    FirstHigher,
    SecondHigher,
}

impl PremiumOrdering {
    pub const SYMMETRIC_TOL: f64 = 1e-6;

    pub fn classify(theta1: f64, theta2: f64) -> Self {
        let d = theta1 - theta2;
        if d.abs() <= Self::SYMMETRIC_TOL {
            PremiumOrdering::Symmetric
        } else if d > 0.0 {
            PremiumOrdering::FirstHigher
        } else {
            PremiumOrdering::SecondHigher
        }
    }

    /// Whether the order agrees with the preference for Company 1: the
    /// preferred company never charges less.
    pub fn consistent_with_preference(self, k2: f64) -> bool {
        match self {
            PremiumOrdering::Symmetric => true,
            PremiumOrdering::FirstHigher => k2 >= 0.5,
            PremiumOrdering::SecondHigher => k2 <= 0.5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PremiumOrdering::Symmetric => "symmetric",
            PremiumOrdering::FirstHigher => "theta1 > theta2",
            PremiumOrdering::SecondHigher => "theta1 < theta2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResult {
    pub theta1: f64,
    pub theta2: f64,
    /// Barrier `b*(θ₁, θ₂)` at the returned premiums.
    pub barrier: f64,
    pub profits: [f64; 2],
    pub iterations: usize,
    pub converged: bool,
    /// `max(|BR₁(θ₂) − θ₁|, |BR₂(θ₁) − θ₂|)` at the returned premiums.
    pub residual: f64,
    pub ordering: PremiumOrdering,
}

/// Empirical occupation frequencies (`s₁..s₄`) and per-period profits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub horizon: usize,
    pub frequencies: [f64; 4],
    pub frequency_se: [f64; 4],
    pub profits: [f64; 2],
    pub profit_se: [f64; 2],
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> DuopolyParams {
        DuopolyParams::new(
            1.25,
            0.97,
            0.015,
            0.8,
            35.853,
            MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap(),
            ThetaBound::CapM,
        )
        .unwrap()
    }

    #[test]
    fn parameter_validation() {
        let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
        let mk = |kappa, delta, k1, k2, m| DuopolyParams::new(kappa, delta, k1, k2, m, loss, ThetaBound::CapM);
        assert!(matches!(mk(2.5, 0.97, 0.015, 0.8, 35.853), Err(Error::InvalidParameter { name: "kappa", .. })));
        assert!(mk(1.25, 1.0, 0.015, 0.8, 35.853).is_err());
        assert!(mk(1.25, 0.97, 0.0, 0.8, 35.853).is_err());
        assert!(mk(1.25, 0.97, 0.015, 1.0, 35.853).is_err());
        assert!(mk(1.25, 0.97, 0.015, 0.8, 10.0).is_err());
        assert!(base().with_premiums(10.0, 20.0).is_err());
        assert!(base().with_premiums(20.0, 36.0).is_err());
        let over = DuopolyParams::new(1.25, 0.97, 0.015, 0.8, 35.853, loss, ThetaBound::CapMOverKappa).unwrap();
        assert!((over.theta_range().1 - 35.853 / 1.25).abs() < 1e-12);
        assert!(over.with_premiums(30.0, 20.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let p = base().with_premiums(20.0, 20.0).unwrap();
        assert!((p.closed_form_barrier() - 4.85).abs() < 1e-12);
        let p = base().with_premiums(20.0, 25.0).unwrap();
        assert!((p.closed_form_barrier() - 5.07498).abs() < 1e-5);
        let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
        let tiny = DuopolyParams::new(1.25, 1e-8, 0.015, 0.8, 35.853, loss, ThetaBound::CapM)
            .unwrap()
            .with_premiums(20.0, 25.0)
            .unwrap();
        assert!(tiny.closed_form_barrier() < 1e-6);
    }

    #[test]
    fn stationary_matches_product_form() {
        let p = base().with_premiums(20.0, 20.0).unwrap();
        let d = p.stationary_distribution().unwrap();
        let a = p.loss().cdf(4.85).unwrap();
        let expected = [0.8 * a, 0.8 * (1.0 - a), 0.2 * a, 0.2 * (1.0 - a)];
        for (x, e) in d.p.iter().zip(expected) {
            assert!((x - e).abs() < 1e-12);
        }
        assert!(d.residual <= 1e-12);
        assert!((d.p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        // frozen from an independent quadrature of the cdf
        assert!((d.p[0] - 0.721_546_828).abs() < 1e-8);
    }

    #[test]
    fn loyal_market_leaves_company_two_empty() {
        let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
        let p = DuopolyParams::new(1.25, 0.97, 0.015, 1.0 - 1e-8, 35.853, loss, ThetaBound::CapM)
            .unwrap()
            .with_premiums(20.0, 20.0)
            .unwrap();
        let d = p.stationary_distribution().unwrap();
        assert!(d.p[2] + d.p[3] < 1e-6);
    }

    #[test]
    fn profit_examples() {
        let p = base().with_premiums(20.0, 20.0).unwrap();
        let j1 = p.expected_profit(Company::One).unwrap();
        let j2 = p.expected_profit(Company::Two).unwrap();
        assert!((j1 - 5.102_22).abs() < 1e-4, "{j1}");
        assert!((j2 / j1 - 0.25).abs() < 1e-10);
        assert!((j1 - p.reduced_profit(Company::One)).abs() < 1e-12);
    }

    #[test]
    fn zero_loading_zero_profit() {
        let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
        let p = DuopolyParams::new(1.0 + 1e-6, 0.97, 0.015, 0.8, 35.853, loss, ThetaBound::CapM).unwrap();
        let m = loss.mean();
        let p = p.with_premiums(m, m).unwrap();
        assert!(p.expected_profit(Company::One).unwrap().abs() < 1e-3);
    }

    #[test]
    fn gradient_requires_side_at_kink() {
        let p = base().with_premiums(25.0, 25.0).unwrap();
        assert!(matches!(p.profit_gradient(Company::One, None), Err(Error::AtKink(_))));
        assert!(p.profit_gradient(Company::One, Some(Side::Below)).is_ok());
        assert!(p.first_order_residual(None).is_err());
    }

    #[test]
    fn best_response_domain() {
        assert!(base().best_response(Company::One, 5.0).is_err());
        assert!(base().best_response(Company::One, 40.0).is_err());
    }

    #[test]
    fn ordering_labels() {
        assert_eq!(PremiumOrdering::classify(1.0, 1.0 + 1e-8), PremiumOrdering::Symmetric);
        assert!(PremiumOrdering::FirstHigher.consistent_with_preference(0.8));
        assert!(!PremiumOrdering::FirstHigher.consistent_with_preference(0.2));
        assert!(PremiumOrdering::SecondHigher.consistent_with_preference(0.2));
    }

    #[test]
    fn simulate_contract() {
        let p = base().with_premiums(20.0, 20.0).unwrap();
        assert!(p.simulate_chain(4.85, 0, 1).is_err());
        let a = p.simulate_chain(4.85, 1000, 9).unwrap();
        assert_eq!(a, p.simulate_chain(4.85, 1000, 9).unwrap());
        assert!((a.frequencies.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let one = p.simulate_chain(4.85, 1, 9).unwrap();
        assert!(one.frequency_se[0].is_nan());
    }

    #[test]
    fn base_equilibrium() {
        let r = base().nash_equilibrium(EquilibriumOptions::default()).unwrap();
        std::eprintln!("{r:?}");
        assert!(r.converged);
        assert!((r.theta1 / 35.8293 - 1.0).abs() < 5e-3);
        assert!((r.theta2 / 33.4501 - 1.0).abs() < 5e-3);
        assert_eq!(r.ordering, PremiumOrdering::FirstHigher);
    }
}
