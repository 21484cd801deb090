//! Optimal loss underreporting under a bonus-malus system with two
//! competing insurers, and the insurers' premium equilibrium in the
//! two-class case.
//!
//! The crate is `no_std` (with `alloc`); IO, configuration and the command
//! line live in the companion `underreport-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bms;
pub mod conditions;
pub mod duopoly;
pub mod error;
pub mod loss;
pub mod optimize;
pub mod quad;
pub mod special;

pub use bms::{
    AffineUtility, BarrierPolicy, BarrierSolution, ChoiceFunction, ExponentialUtility, Identity,
    MarketModel, PremiumSchedule, SwitchClassConvention, TransitionMatrix, Utility, ValueTable,
};
pub use conditions::{
    check_corollary_b1, check_prop41, check_theorem42, Bound, Check, ConditionReport, EqmConstants,
    LossInterval,
};
pub use duopoly::{
    Company, DuopolyParams, EquilibriumOptions, EquilibriumResult, PremiumOrdering, Side,
    SimulationReport, StationaryDistribution, ThetaBound,
};
pub use error::{Error, MarketReport, Result, Violation};
pub use loss::{LossSampler, MixedLoss, PositiveLaw};
