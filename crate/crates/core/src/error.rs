use core::fmt;

use alloc::vec::Vec;

/// Errors raised by the model constructors and solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested functional.
    #[error("{what} = {value} is outside the domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A model parameter violates its documented range.
    #[error("parameter {name} = {value} must lie in {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{what} index {index} out of range (length {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An iterative solver hit its iteration cap.
    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A premium schedule violates ordering, loading or cap constraints.
    #[error("{0}")]
    Market(MarketReport),

    /// A utility and its inverse disagree on the premium range.
    #[error("utility inverse is inconsistent at x = {at}: U^-1(U(x)) = {roundtrip}")]
    InconsistentUtility { at: f64, roundtrip: f64 },

    /// A one-sided derivative was needed but no side was given.
    #[error("profit gradient requested at the kink theta1 = theta2 = {0} without a side")]
    AtKink(f64),

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("singular linear system")]
    Singular,
}

pub type Result<T> = core::result::Result<T, Error>;

/// One violated premium constraint. `class` is zero-based; messages print it one-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `c[class] < c[class - 1]`.
    Ordering { company: usize, class: usize },
    /// `c[class] < E[L]` (negative loading).
    Loading { company: usize, class: usize, premium: f64, mean_loss: f64 },
    /// `c[class] > M`.
    Cap { company: usize, class: usize, premium: f64, cap: f64 },
    /// Premium is not a positive finite number.
    NonPositive { company: usize, class: usize, premium: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Ordering { company, class } => write!(
                f,
                "ordering: company {} class {} premium is below class {}",
                company + 1,
                class + 1,
                class
            ),
            Violation::Loading { company, class, premium, mean_loss } => write!(
                f,
                "loading: company {} class {} premium {premium} < E[L] = {mean_loss}",
                company + 1,
                class + 1
            ),
            Violation::Cap { company, class, premium, cap } => write!(
                f,
                "cap: company {} class {} premium {premium} > M = {cap}",
                company + 1,
                class + 1
            ),
            Violation::NonPositive { company, class, premium } => write!(
                f,
                "company {} class {} premium {premium} is not positive and finite",
                company + 1,
                class + 1
            ),
        }
    }
}

/// Every constraint violated by a market's premium schedules.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MarketReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for MarketReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid premium schedule:")?;
        for v in &self.violations {
            write!(f, " [{v}]")?;
        }
        Ok(())
    }
}
