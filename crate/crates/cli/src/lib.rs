//! Configuration parsing, experiment runners and CSV output for the
//! `underreport` command line.

pub mod config;
pub mod format;
pub mod run;

pub use config::{ConfigError, RunConfig, Scale, SweepParam, SweepSpec, ThetaBoundName};
pub use run::{RunError, SweepRow, SWEEP_HEADER};
