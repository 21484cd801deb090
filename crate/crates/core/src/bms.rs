//! N-class bonus-malus market with two insurers.
//!
//! States are `(class, company)` pairs flattened company-major:
//! `index = company·N + class`, both zero-based. For `N = 2` this gives the
//! order `(1,1), (2,1), (1,2), (2,2)` in one-based notation.
//!
//! The insured minimizes `E Σ_{t≥1} δ^t (c(X_t) + L_t·1{L_t ≤ b(X_t)})`, so the
//! one-step cost carries a leading `δ`. With down/up continuations `D` and
//! `U` (both already scaled by the same `δ`), the per-state objective is
//! `δ(c + E[L·1{L≤b}]) + δ(F(b)·D + (1 − F(b))·U)` whose derivative in `b` is
//! `δ f_L(b)(b − (U − D))`. The minimizing barrier is therefore `0 ∨ (U − D)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{MarketReport, Violation};
use crate::loss::MixedLoss;
use crate::quad;
use crate::{Error, Result};

/// Largest admissible discount factor.
pub const MAX_DELTA: f64 = 1.0 - 1e-6;
/// Default value-iteration cap.
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

/// Per-class premiums `c_1 ≤ … ≤ c_N` of one insurer.
#[derive(Debug, Clone, PartialEq)]
pub struct PremiumSchedule(Vec<f64>);

impl PremiumSchedule {
    pub fn new(premiums: Vec<f64>) -> Self {
        Self(premiums)
    }

    pub fn premiums(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for PremiumSchedule {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Probability `η(Δc)` that an insured picks Company 1 when the class premium
/// gap is `Δc = c² − c¹`.
#[derive(Debug, Clone, PartialEq)]
pub enum ChoiceFunction {
    /// `k2·e^{k1·Δc}` for `Δc < 0`, `1 − (1 − k2)·e^{−k1·Δc}` otherwise.
    Exponential { k1: f64, k2: f64 },
    /// Piecewise-linear through `(Δc, η)` knots sorted by `Δc`, flat outside.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl ChoiceFunction {
    pub fn exponential(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1 < 1.0) {
            return Err(Error::InvalidParameter { name: "k1", value: k1, expected: "(0, 1)" });
        }
        if !(k2 > 0.0 && k2 < 1.0) {
            return Err(Error::InvalidParameter { name: "k2", value: k2, expected: "(0, 1)" });
        }
        Ok(Self::Exponential { k1, k2 })
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Unsupported("tabulated choice function needs at least one knot"));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidParameter {
                    name: "choice knot",
                    value: w[1].0,
                    expected: "strictly increasing abscissae",
                });
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidParameter {
                    name: "choice knot",
                    value: w[1].1,
                    expected: "nondecreasing probabilities",
                });
            }
        }
        if let Some(&(_, y)) = knots.iter().find(|k| !(0.0..=1.0).contains(&k.1)) {
            return Err(Error::InvalidParameter { name: "choice knot", value: y, expected: "[0, 1]" });
        }
        Ok(Self::Tabulated { knots })
    }

    /// `η(Δc)`.
    pub fn prob_company_one(&self, gap: f64) -> f64 {
        match self {
            ChoiceFunction::Exponential { k1, k2 } => {
                if gap < 0.0 {
                    k2 * libm::exp(k1 * gap)
                } else {
                    1.0 - (1.0 - k2) * libm::exp(-k1 * gap)
                }
            }
            ChoiceFunction::Tabulated { knots } => {
                let first = knots[0];
                let last = knots[knots.len() - 1];
                if gap <= first.0 {
                    return first.1;
                }
                if gap >= last.0 {
                    return last.1;
                }
                let k = knots.partition_point(|p| p.0 <= gap);
                let (x0, y0) = knots[k - 1];
                let (x1, y1) = knots[k];
                y0 + (y1 - y0) * (gap - x0) / (x1 - x0)
            }
        }
    }
}

/// Which class's premium gap drives company switching on an up-move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwitchClassConvention {
    /// Every row uses the gap at the down-class `(n−1) ∨ 1`.
    #[default]
    Down,
    /// Up-move rows use the gap at the up-class `(n+1) ∧ N`.
    Next,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketModel {
    schedules: [PremiumSchedule; 2],
    choice: ChoiceFunction,
    delta: f64,
    loss: MixedLoss,
    cap: Option<f64>,
    convention: SwitchClassConvention,
}

impl MarketModel {
    /// Checks structure only (two schedules of equal length `N ≥ 2`, finite
    /// premiums, `δ ∈ (0, 1 − 10⁻⁶]`). Ordering, loading and cap constraints
    /// are checked by [`MarketModel::validate`].
    pub fn new(
        schedules: [PremiumSchedule; 2],
        choice: ChoiceFunction,
        delta: f64,
        loss: MixedLoss,
    ) -> Result<Self> {
        let n = schedules[0].len();
        if n < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: n });
        }
        if schedules[1].len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: schedules[1].len() });
        }
        if !(delta > 0.0 && delta <= MAX_DELTA + 1e-15) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                expected: "(0, 1 - 1e-6]",
            });
        }
        if let Some(&c) = schedules.iter().flat_map(|s| s.0.iter()).find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter { name: "premium", value: c, expected: "finite" });
        }
        Ok(Self {
            schedules,
            choice,
            delta,
            loss,
            cap: None,
            convention: SwitchClassConvention::Down,
        })
    }

    /// Sets the premium cap `M` enforced by [`MarketModel::validate`].
    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_convention(mut self, convention: SwitchClassConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn n_classes(&self) -> usize {
        self.schedules[0].len()
    }

    pub fn n_states(&self) -> usize {
        2 * self.n_classes()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn loss(&self) -> &MixedLoss {
        &self.loss
    }

    pub fn choice(&self) -> &ChoiceFunction {
        &self.choice
    }

    pub fn schedules(&self) -> &[PremiumSchedule; 2] {
        &self.schedules
    }

    pub fn convention(&self) -> SwitchClassConvention {
        self.convention
    }

    pub fn premium(&self, class: usize, company: usize) -> f64 {
        self.schedules[company].0[class]
    }

    pub fn state_index(&self, class: usize, company: usize) -> usize {
        company * self.n_classes() + class
    }

    /// Lists every ordering, loading and cap violation; `Ok` when none.
    pub fn validate(&self) -> Result<()> {
        let mean = self.loss.mean();
        let mut report = MarketReport::default();
        for (company, s) in self.schedules.iter().enumerate() {
            for (class, &c) in s.0.iter().enumerate() {
                if !(c > 0.0) {
                    report.violations.push(Violation::NonPositive { company, class, premium: c });
                }
                if class > 0 && c < s.0[class - 1] {
                    report.violations.push(Violation::Ordering { company, class });
                }
                if c < mean {
                    report.violations.push(Violation::Loading {
                        company,
                        class,
                        premium: c,
                        mean_loss: mean,
                    });
                }
                if let Some(cap) = self.cap {
                    if c > cap {
                        report.violations.push(Violation::Cap { company, class, premium: c, cap });
                    }
                }
            }
        }
        if report.violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Market(report))
        }
    }

    /// Probability that an insured currently with `current_company` leaves it
    /// when assigned to `target_class`.
    pub fn switch_probability(&self, current_company: usize, target_class: usize) -> Result<f64> {
        if current_company > 1 {
            return Err(Error::IndexOutOfRange { what: "company", index: current_company, len: 2 });
        }
        if target_class >= self.n_classes() {
            return Err(Error::IndexOutOfRange {
                what: "class",
                index: target_class,
                len: self.n_classes(),
            });
        }
        Ok(self.switch_prob(current_company, target_class))
    }

    fn switch_prob(&self, company: usize, class: usize) -> f64 {
        let gap = self.premium(class, 1) - self.premium(class, 0);
        let p1 = self.choice.prob_company_one(gap);
        if company == 0 {
            1.0 - p1
        } else {
            p1
        }
    }

    /// Destination classes and switch probabilities for a state:
    /// `(down_class, down_switch, up_class, up_switch)`.
    fn moves(&self, class: usize, company: usize) -> (usize, f64, usize, f64) {
        let n = self.n_classes();
        let down = class.saturating_sub(1);
        let up = (class + 1).min(n - 1);
        let s_down = self.switch_prob(company, down);
        let s_up = match self.convention {
            SwitchClassConvention::Down => s_down,
            SwitchClassConvention::Next => self.switch_prob(company, up),
        };
        (down, s_down, up, s_up)
    }

    /// Row-stochastic `2N × 2N` transition matrix under `policy`.
    pub fn transition_matrix(&self, policy: &BarrierPolicy) -> Result<TransitionMatrix> {
        if policy.n_classes != self.n_classes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_classes(),
                found: policy.n_classes,
            });
        }
        let dim = self.n_states();
        let mut data = vec![0.0; dim * dim];
        for company in 0..2 {
            let other = 1 - company;
            for class in 0..self.n_classes() {
                let row = self.state_index(class, company);
                let a = self.loss.cdf_unchecked(policy.get(class, company));
                let (down, s_d, up, s_u) = self.moves(class, company);
                let r = &mut data[row * dim..(row + 1) * dim];
                r[self.state_index(down, company)] += a * (1.0 - s_d);
                r[self.state_index(down, other)] += a * s_d;
                r[self.state_index(up, company)] += (1.0 - a) * (1.0 - s_u);
                r[self.state_index(up, other)] += (1.0 - a) * s_u;
            }
        }
        Ok(TransitionMatrix { dim, data })
    }

    /// `φ(n, i) = U − D`: expected continuation after an up-move minus after a down-move.
    pub fn phi(&self, v: &ValueTable, class: usize, company: usize) -> f64 {
        let (down, up) = self.continuations(v, class, company);
        up - down
    }

    fn continuations(&self, v: &ValueTable, class: usize, company: usize) -> (f64, f64) {
        let other = 1 - company;
        let (down, s_d, up, s_u) = self.moves(class, company);
        let d = (1.0 - s_d) * v.get(down, company) + s_d * v.get(down, other);
        let u = (1.0 - s_u) * v.get(up, company) + s_u * v.get(up, other);
        (d, u)
    }

    /// Barrier `0 ∨ φ(n, i)` recomputed from a value table.
    pub fn barrier_from_values(&self, v: &ValueTable) -> BarrierPolicy {
        let n = self.n_classes();
        let mut b = BarrierPolicy::zeros(n);
        for company in 0..2 {
            for class in 0..n {
                b.set(class, company, self.phi(v, class, company).max(0.0));
            }
        }
        b
    }

    /// One application of the Bellman operator plus its pointwise minimizer.
    pub fn bellman_update(&self, v: &ValueTable) -> (ValueTable, BarrierPolicy) {
        self.bellman_generic(v, &Identity)
    }

    fn bellman_generic<U: Utility + ?Sized>(&self, v: &ValueTable, u: &U) -> (ValueTable, BarrierPolicy) {
        let n = self.n_classes();
        let mut out = ValueTable::zeros(n);
        let mut policy = BarrierPolicy::zeros(n);
        for company in 0..2 {
            for class in 0..n {
                let c = self.premium(class, company);
                let (d, up) = self.continuations(v, class, company);
                let b = u.barrier(up - d, c);
                let a = self.loss.cdf_unchecked(b);
                let cost = u.expected_period_cost(&self.loss, c, b);
                let value = self.delta * (cost + a * d + (1.0 - a) * up);
                out.set(class, company, value);
                policy.set(class, company, b);
            }
        }
        (out, policy)
    }

    /// Value iteration from `V ≡ 0` with the default iteration cap.
    pub fn solve_optimal_barrier(&self, tol: f64) -> Result<BarrierSolution> {
        self.solve_with(&Identity, tol, DEFAULT_MAX_ITERATIONS)
    }

    /// Value iteration from `V ≡ 0`. Stops once the sup-norm step is at most
    /// `tol·(1 − δ)/(2δ)`, which bounds the error in `V*` by `tol/2`. The
    /// barrier is extracted from the returned table.
    pub fn solve_optimal_barrier_capped(&self, tol: f64, max_iterations: usize) -> Result<BarrierSolution> {
        self.solve_with(&Identity, tol, max_iterations)
    }

    /// Risk-averse variant: per-period cost `U(c + hidden loss)` and barrier
    /// `0 ∨ (U⁻¹[φ̃ + U(c)] − c)`.
    pub fn solve_optimal_barrier_utility<U: Utility + ?Sized>(
        &self,
        utility: &U,
        tol: f64,
    ) -> Result<BarrierSolution> {
        self.check_utility(utility)?;
        self.solve_with(utility, tol, DEFAULT_MAX_ITERATIONS)
    }

    /// Checks `U⁻¹(U(x)) = x` to `10⁻¹⁰` (relative) and strict monotonicity
    /// on a grid spanning the premium range widened by `E[L]`.
    pub fn check_utility<U: Utility + ?Sized>(&self, utility: &U) -> Result<()> {
        let all = self.schedules.iter().flat_map(|s| s.0.iter().copied());
        let lo = all.clone().fold(f64::INFINITY, f64::min);
        let hi = all.fold(f64::NEG_INFINITY, f64::max) + self.loss.mean();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=64 {
            let x = lo + (hi - lo) * k as f64 / 64.0;
            let y = utility.value(x);
            let back = utility.inverse(y);
            if !((back - x).abs() <= 1e-10 * x.abs().max(1.0)) || !(y > prev) {
                return Err(Error::InconsistentUtility { at: x, roundtrip: back });
            }
            prev = y;
        }
        Ok(())
    }

    fn solve_with<U: Utility + ?Sized>(&self, u: &U, tol: f64, max_iterations: usize) -> Result<BarrierSolution> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter { name: "tol", value: tol, expected: "(0, inf)" });
        }
        let stop = tol * (1.0 - self.delta) / (2.0 * self.delta);
        // V_k = W_k + m_k·1 with W_k(0) = 0. Since T(W + m) = T(W) + δm, the
        // iteration runs on the small table W and the increments of m, so
        // residuals carry no rounding from the large common level of V.
        let mut w = ValueTable::zeros(self.n_classes());
        let mut m = 0.0;
        let mut dm = 0.0;
        let mut prev_anchor = 0.0;
        let mut residuals = Vec::new();
        let mut residual = f64::INFINITY;
        for it in 1..=max_iterations {
            let (mut next, _) = self.bellman_generic(&w, u);
            let anchor = next.values[0];
            for x in &mut next.values {
                *x -= anchor;
            }
            dm = if it == 1 { anchor } else { self.delta * dm + (anchor - prev_anchor) };
            prev_anchor = anchor;
            m += dm;
            residual = next.values.iter().zip(&w.values).map(|(a, b)| (a - b + dm).abs()).fold(0.0, f64::max);
            residuals.push(residual);
            w = next;
            if residual <= stop {
                let policy = self.extract_barrier(&w, u);
                let values = ValueTable { n_classes: w.n_classes, values: w.values.iter().map(|x| x + m).collect() };
                return Ok(BarrierSolution { policy, values, iterations: it, residuals });
            }
        }
        Err(Error::NoConvergence { iterations: max_iterations, residual })
    }

    fn extract_barrier<U: Utility + ?Sized>(&self, v: &ValueTable, u: &U) -> BarrierPolicy {
        let n = self.n_classes();
        let mut b = BarrierPolicy::zeros(n);
        for company in 0..2 {
            for class in 0..n {
                let phi = self.phi(v, class, company);
                b.set(class, company, u.barrier(phi, self.premium(class, company)));
            }
        }
        b
    }
}

/// Output of value iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierSolution {
    pub policy: BarrierPolicy,
    pub values: ValueTable,
    pub iterations: usize,
    /// Sup-norm step `‖V_{k+1} − V_k‖` for every iteration.
    pub residuals: Vec<f64>,
}

/// `N × 2` table of nonnegative reporting barriers.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierPolicy {
    n_classes: usize,
    barriers: Vec<f64>,
}

impl BarrierPolicy {
    pub fn zeros(n_classes: usize) -> Self {
        Self { n_classes, barriers: vec![0.0; 2 * n_classes] }
    }

    /// Same barrier in every state.
    pub fn uniform(n_classes: usize, b: f64) -> Result<Self> {
        if !(b >= 0.0) {
            return Err(Error::Domain { what: "barrier", value: b, expected: ">= 0" });
        }
        Ok(Self { n_classes, barriers: vec![b; 2 * n_classes] })
    }

    /// From per-company columns `barriers[company][class]`.
    pub fn from_columns(columns: [Vec<f64>; 2]) -> Result<Self> {
        let n = columns[0].len();
        if columns[1].len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: columns[1].len() });
        }
        if let Some(&b) = columns.iter().flatten().find(|b| !(**b >= 0.0)) {
            return Err(Error::Domain { what: "barrier", value: b, expected: ">= 0" });
        }
        let mut barriers = columns[0].clone();
        barriers.extend_from_slice(&columns[1]);
        Ok(Self { n_classes: n, barriers })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, class: usize, company: usize) -> f64 {
        self.barriers[company * self.n_classes + class]
    }

    fn set(&mut self, class: usize, company: usize, b: f64) {
        self.barriers[company * self.n_classes + class] = b;
    }

    /// Flattened company-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.barriers
    }
}

/// `V(n, i)` over the `2N` states, company-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    n_classes: usize,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn zeros(n_classes: usize) -> Self {
        Self { n_classes, values: vec![0.0; 2 * n_classes] }
    }

    pub fn from_flat(n_classes: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 2 * n_classes {
            return Err(Error::DimensionMismatch { expected: 2 * n_classes, found: values.len() });
        }
        Ok(Self { n_classes, values })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, class: usize, company: usize) -> f64 {
        self.values[company * self.n_classes + class]
    }

    fn set(&mut self, class: usize, company: usize, v: f64) {
        self.values[company * self.n_classes + class] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_distance(&self, other: &ValueTable) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Dense row-major stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.data[from * self.dim + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.data[from * self.dim..(from + 1) * self.dim]
    }

    /// Solves `(I − Tᵀ)p = 0` with `Σp = 1` by replacing the last balance
    /// equation with the normalization and eliminating with partial pivoting.
    pub fn stationary_distribution(&self) -> Result<Vec<f64>> {
        let n = self.dim;
        let mut a = vec![0.0; n * (n + 1)];
        let w = n + 1;
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                a[i * w + j] = id - self.get(j, i);
            }
        }
        for j in 0..n {
            a[(n - 1) * w + j] = 1.0;
        }
        a[(n - 1) * w + n] = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * w + col].abs().total_cmp(&a[y * w + col].abs()))
                .unwrap_or(col);
            if a[pivot * w + col].abs() < 1e-300 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for k in 0..w {
                    a.swap(pivot * w + k, col * w + k);
                }
            }
            for r in 0..n {
                if r != col {
                    let factor = a[r * w + col] / a[col * w + col];
                    if factor != 0.0 {
                        for k in col..w {
                            a[r * w + k] -= factor * a[col * w + k];
                        }
                    }
                }
            }
        }
        Ok((0..n).map(|i| a[i * w + n] / a[i * w + i]).collect())
    }

    /// `‖Tᵀp − p‖_∞`.
    pub fn stationarity_residual(&self, p: &[f64]) -> f64 {
        (0..self.dim)
            .map(|j| {
                let inflow: f64 = (0..self.dim).map(|i| p[i] * self.get(i, j)).sum();
                (inflow - p[j]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Strictly increasing per-period utility applied to expenses.
pub trait Utility {
    fn value(&self, x: f64) -> f64;
    fn inverse(&self, y: f64) -> f64;

    /// `E[U(c + L·1{L ≤ b})] = U(c) + ∫₀ᵇ (U(c + ℓ) − U(c)) f_L(ℓ) dℓ`.
    fn expected_period_cost(&self, loss: &MixedLoss, premium: f64, barrier: f64) -> f64 {
        let base = self.value(premium);
        if barrier <= 0.0 {
            return base;
        }
        let integral = quad::integrate(
            |l| {
                if l <= 0.0 {
                    0.0
                } else {
                    (self.value(premium + l) - base) * loss.pdf_unchecked(l)
                }
            },
            0.0,
            barrier,
            1e-15 * (1.0 + base.abs()),
            1e-13,
        );
        base + integral
    }

    /// `0 ∨ (U⁻¹[φ̃ + U(c)] − c)`.
    fn barrier(&self, phi: f64, premium: f64) -> f64 {
        (self.inverse(phi + self.value(premium)) - premium).max(0.0)
    }
}

/// Risk neutrality, `U(x) = x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Utility for Identity {
    fn value(&self, x: f64) -> f64 {
        x
    }
    fn inverse(&self, y: f64) -> f64 {
        y
    }
    fn expected_period_cost(&self, loss: &MixedLoss, premium: f64, barrier: f64) -> f64 {
        premium + loss.hidden_unchecked(barrier)
    }
    fn barrier(&self, phi: f64, _premium: f64) -> f64 {
        phi.max(0.0)
    }
}

/// `U(x) = e^{γx}`, `γ > 0`.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialUtility {
    pub gamma: f64,
}

impl Utility for ExponentialUtility {
    fn value(&self, x: f64) -> f64 {
        libm::exp(self.gamma * x)
    }
    fn inverse(&self, y: f64) -> f64 {
        libm::log(y) / self.gamma
    }
}

/// `U(x) = scale·x + shift`, `scale > 0`.
#[derive(Debug, Clone, Copy)]
pub struct AffineUtility {
    pub scale: f64,
    pub shift: f64,
}

impl Utility for AffineUtility {
    fn value(&self, x: f64) -> f64 {
        self.scale * x + self.shift
    }
    fn inverse(&self, y: f64) -> f64 {
        (y - self.shift) / self.scale
    }
}
