//! Zero-inflated per-period loss `L`: an atom of mass `p0` at zero mixed with
//! a continuous law on `(0, ∞)`.
//!
//! The density convention absorbs the mixture weight: `pdf(x) = (1 − p0)·g(x)`
//! where `g` is the density of `L | L > 0`, so that `cdf' = pdf` on `(0, ∞)`.
//! Every downstream functional (barrier conditions, profit gradients) uses
//! this convention.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::special::{gamma_p, gamma_q, ln_gamma};
use crate::{Error, Result};

/// Law of the positive part `L | L > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositiveLaw {
    /// Gamma with shape `α` and rate `λ` (mean `α/λ`).
    Gamma { shape: f64, rate: f64 },
    /// Weibull with shape `k` and scale `s`.
    Weibull { shape: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedLoss {
    p0: f64,
    positive: PositiveLaw,
}

impl MixedLoss {
    pub fn new(p0: f64, positive: PositiveLaw) -> Result<Self> {
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(Error::InvalidParameter { name: "p0", value: p0, expected: "(0, 1)" });
        }
        let (a, b, na, nb) = match positive {
            PositiveLaw::Gamma { shape, rate } => (shape, rate, "alpha", "lambda"),
            PositiveLaw::Weibull { shape, scale } => (shape, scale, "shape", "scale"),
        };
        for (v, name) in [(a, na), (b, nb)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, value: v, expected: "(0, inf)" });
            }
        }
        Ok(Self { p0, positive })
    }

    /// Zero-inflated Gamma(`shape`, `rate`).
    pub fn gamma(p0: f64, shape: f64, rate: f64) -> Result<Self> {
        Self::new(p0, PositiveLaw::Gamma { shape, rate })
    }

    pub fn weibull(p0: f64, shape: f64, scale: f64) -> Result<Self> {
        Self::new(p0, PositiveLaw::Weibull { shape, scale })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn positive(&self) -> PositiveLaw {
        self.positive
    }

    /// `P(L ≤ x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        Ok(self.cdf_unchecked(x))
    }

    /// `f_L(x) = (1 − p0)·g(x)` for `x > 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_positive("x", x)?;
        Ok(self.pdf_unchecked(x))
    }

    /// `f_L'(x) / f_L(x)`; the mixture weight cancels.
    pub fn log_pdf_derivative(&self, x: f64) -> Result<f64> {
        check_positive("x", x)?;
        Ok(self.log_pdf_derivative_unchecked(x))
    }

    /// `E[L]`.
    pub fn mean(&self) -> f64 {
        (1.0 - self.p0) * self.positive_mean()
    }

    /// `E[L·1{L > b}]`.
    pub fn tail_partial_expectation(&self, b: f64) -> Result<f64> {
        check_nonneg("b", b)?;
        Ok(self.tail_unchecked(b))
    }

    /// `E[L·1{L ≤ b}]`, the expected hidden loss under barrier `b`.
    pub fn hidden_expectation(&self, b: f64) -> Result<f64> {
        check_nonneg("b", b)?;
        Ok(self.hidden_unchecked(b))
    }

    /// Mode of the positive-part density, if it is interior.
    pub fn mode(&self) -> Option<f64> {
        match self.positive {
            PositiveLaw::Gamma { shape, rate } if shape > 1.0 => Some((shape - 1.0) / rate),
            PositiveLaw::Weibull { shape, scale } if shape > 1.0 => {
                Some(scale * libm::pow((shape - 1.0) / shape, 1.0 / shape))
            }
            _ => None,
        }
    }

    /// `n` i.i.d. draws from a ChaCha stream seeded with `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::Domain { what: "n", value: 0.0, expected: "n >= 1" });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampler = self.sampler();
        Ok((0..n).map(|_| sampler.draw(&mut rng)).collect())
    }

    /// A reusable per-draw sampler, for callers that own their RNG.
    pub fn sampler(&self) -> LossSampler {
        let positive = match self.positive {
            PositiveLaw::Gamma { shape, rate } => {
                PositiveSampler::Gamma(rand_distr::Gamma::new(shape, 1.0 / rate).expect("validated"))
            }
            PositiveLaw::Weibull { shape, scale } => {
                PositiveSampler::Weibull(rand_distr::Weibull::new(scale, shape).expect("validated"))
            }
        };
        LossSampler { p0: self.p0, positive }
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.p0;
        }
        let g = match self.positive {
            PositiveLaw::Gamma { shape, rate } => gamma_p(shape, rate * x),
            PositiveLaw::Weibull { shape, scale } => -libm::expm1(-libm::pow(x / scale, shape)),
        };
        self.p0 + (1.0 - self.p0) * g
    }

    pub(crate) fn pdf_unchecked(&self, x: f64) -> f64 {
        let g = match self.positive {
            PositiveLaw::Gamma { shape, rate } => libm::exp(
                shape * libm::log(rate) + (shape - 1.0) * libm::log(x) - rate * x - ln_gamma(shape),
            ),
            PositiveLaw::Weibull { shape, scale } => {
                let z = x / scale;
                shape / scale * libm::pow(z, shape - 1.0) * libm::exp(-libm::pow(z, shape))
            }
        };
        (1.0 - self.p0) * g
    }

    pub(crate) fn log_pdf_derivative_unchecked(&self, x: f64) -> f64 {
        match self.positive {
            PositiveLaw::Gamma { shape, rate } => (shape - 1.0) / x - rate,
            PositiveLaw::Weibull { shape, scale } => {
                (shape - 1.0) / x - shape * libm::pow(x, shape - 1.0) / libm::pow(scale, shape)
            }
        }
    }

    pub(crate) fn tail_unchecked(&self, b: f64) -> f64 {
        let b = b.max(0.0);
        let q = match self.positive {
            PositiveLaw::Gamma { shape, rate } => gamma_q(shape + 1.0, rate * b),
            PositiveLaw::Weibull { shape, scale } => {
                gamma_q(1.0 + 1.0 / shape, libm::pow(b / scale, shape))
            }
        };
        self.mean() * q
    }

    pub(crate) fn hidden_unchecked(&self, b: f64) -> f64 {
        let b = b.max(0.0);
        let p = match self.positive {
            PositiveLaw::Gamma { shape, rate } => gamma_p(shape + 1.0, rate * b),
            PositiveLaw::Weibull { shape, scale } => {
                gamma_p(1.0 + 1.0 / shape, libm::pow(b / scale, shape))
            }
        };
        self.mean() * p
    }

    fn positive_mean(&self) -> f64 {
        match self.positive {
            PositiveLaw::Gamma { shape, rate } => shape / rate,
            PositiveLaw::Weibull { shape, scale } => scale * libm::tgamma(1.0 + 1.0 / shape),
        }
    }
}

/// Draws single losses from a caller-owned RNG.
#[derive(Debug, Clone)]
pub struct LossSampler {
    p0: f64,
    positive: PositiveSampler,
}

#[derive(Debug, Clone)]
enum PositiveSampler {
    Gamma(rand_distr::Gamma<f64>),
    Weibull(rand_distr::Weibull<f64>),
}

impl LossSampler {
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if rng.random::<f64>() < self.p0 {
            return 0.0;
        }
        match &self.positive {
            PositiveSampler::Gamma(d) => d.sample(rng),
            PositiveSampler::Weibull(d) => d.sample(rng),
        }
    }
}

fn check_nonneg(what: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x, expected: ">= 0" })
    }
}

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x, expected: "> 0" })
    }
}
