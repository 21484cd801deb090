//! Flat TOML run configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use underreport::{DuopolyParams, EquilibriumOptions, MixedLoss, ThetaBound};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid {field} = {value}: expected {expected}")]
    Invalid { field: String, value: f64, expected: String },
    #[error("missing {0}")]
    Missing(&'static str),
}

impl ConfigError {
    fn invalid(field: &str, value: f64, expected: &str) -> Self {
        ConfigError::Invalid { field: field.to_string(), value, expected: expected.to_string() }
    }
}

impl From<underreport::Error> for ConfigError {
    fn from(e: underreport::Error) -> Self {
        match e {
            underreport::Error::InvalidParameter { name, value, expected } => {
                let field = if name == "M" { "m" } else { name };
                ConfigError::invalid(field, value, expected)
            }
            other => ConfigError::Invalid { field: "config".into(), value: f64::NAN, expected: other.to_string() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
pub enum ThetaBoundName {
    #[default]
    #[serde(rename = "m")]
    M,
    #[serde(rename = "m-over-kappa", alias = "m_over_kappa")]
    MOverKappa,
}

impl From<ThetaBoundName> for ThetaBound {
    fn from(b: ThetaBoundName) -> Self {
        match b {
            ThetaBoundName::M => ThetaBound::CapM,
            ThetaBoundName::MOverKappa => ThetaBound::CapMOverKappa,
        }
    }
}

/// Parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "k1")]
    K1,
    #[serde(rename = "k2")]
    K2,
    #[serde(rename = "M", alias = "m")]
    M,
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "p0")]
    P0,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "lambda")]
    Lambda,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::K1 => "k1",
            SweepParam::K2 => "k2",
            SweepParam::M => "M",
            SweepParam::Kappa => "kappa",
            SweepParam::Delta => "delta",
            SweepParam::P0 => "p0",
            SweepParam::Alpha => "alpha",
            SweepParam::Lambda => "lambda",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "k1" => SweepParam::K1,
            "k2" => SweepParam::K2,
            "M" | "m" => SweepParam::M,
            "kappa" => SweepParam::Kappa,
            "delta" => SweepParam::Delta,
            "p0" => SweepParam::P0,
            "alpha" => SweepParam::Alpha,
            "lambda" => SweepParam::Lambda,
            _ => return None,
        })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl SweepSpec {
    /// Grid points in order; the last point is exactly `to`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    return self.to;
                }
                let t = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.from + (self.to - self.from) * t,
                    Scale::Log => (self.from.ln() + (self.to.ln() - self.from.ln()) * t).exp(),
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.from < self.to) {
            return Err(ConfigError::invalid("sweep_to", self.to, "a value above sweep_from"));
        }
        if self.steps < 2 {
            return Err(ConfigError::invalid("sweep_steps", self.steps as f64, ">= 2"));
        }
        if self.scale == Scale::Log && !(self.from > 0.0) {
            return Err(ConfigError::invalid("sweep_from", self.from, "> 0 on a log scale"));
        }
        Ok(())
    }
}

fn default_vi_tol() -> f64 {
    1e-10
}
fn default_vi_max_iterations() -> usize {
    underreport::bms::DEFAULT_MAX_ITERATIONS
}
fn default_eq_tol() -> f64 {
    EquilibriumOptions::default().tol
}
fn default_damping() -> f64 {
    EquilibriumOptions::default().damping
}
fn default_eq_max_iterations() -> usize {
    EquilibriumOptions::default().max_iterations
}
fn default_horizon() -> usize {
    1_000_000
}

/// Keys mirror the model symbols; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub p0: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub delta: f64,
    pub k1: f64,
    pub k2: f64,
    #[serde(alias = "M")]
    pub m: f64,
    #[serde(default)]
    pub theta_bound: ThetaBoundName,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,

    #[serde(default = "default_vi_tol")]
    pub vi_tol: f64,
    #[serde(default = "default_vi_max_iterations")]
    pub vi_max_iterations: usize,
    #[serde(default = "default_eq_tol")]
    pub eq_tol: f64,
    #[serde(default = "default_damping")]
    pub damping: f64,
    #[serde(default = "default_eq_max_iterations")]
    pub eq_max_iterations: usize,

    pub sweep_param: Option<SweepParam>,
    pub sweep_from: Option<f64>,
    pub sweep_to: Option<f64>,
    pub sweep_steps: Option<usize>,
    #[serde(default)]
    pub sweep_scale: Scale,

    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::from_toml(&text).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse { path: path.into(), message },
            other => other,
        })
    }

    /// Parses and validates; TOML errors carry line and column.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)
            .map_err(|e| ConfigError::Parse { path: PathBuf::from("<config>"), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let params = self.params()?;
        if let (Some(t1), Some(t2)) = (self.theta1, self.theta2) {
            params.with_premiums(t1, t2)?;
        } else if self.theta1.is_some() != self.theta2.is_some() {
            return Err(ConfigError::Missing("theta1/theta2: give both premiums or neither"));
        }
        if !(self.vi_tol > 0.0) {
            return Err(ConfigError::invalid("vi_tol", self.vi_tol, "(0, inf)"));
        }
        if !(self.eq_tol > 0.0) {
            return Err(ConfigError::invalid("eq_tol", self.eq_tol, "(0, inf)"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(ConfigError::invalid("damping", self.damping, "(0, 1]"));
        }
        if self.eq_max_iterations == 0 || self.vi_max_iterations == 0 {
            return Err(ConfigError::invalid("max_iterations", 0.0, ">= 1"));
        }
        if self.horizon == 0 {
            return Err(ConfigError::invalid("horizon", 0.0, ">= 1"));
        }
        if let Some(spec) = self.sweep_spec_if_complete() {
            spec.validate()?;
        }
        Ok(())
    }

    pub fn loss(&self) -> Result<MixedLoss, ConfigError> {
        Ok(MixedLoss::gamma(self.p0, self.alpha, self.lambda)?)
    }

    /// Model parameters at premiums `θ₁ = θ₂ = E[L]`.
    pub fn params(&self) -> Result<DuopolyParams, ConfigError> {
        Ok(DuopolyParams::new(
            self.kappa,
            self.delta,
            self.k1,
            self.k2,
            self.m,
            self.loss()?,
            self.theta_bound.into(),
        )?)
    }

    /// Premiums from the config, or the midpoint of `Θ` for both.
    pub fn params_at_premiums(&self) -> Result<DuopolyParams, ConfigError> {
        let p = self.params()?;
        let (t1, t2) = match (self.theta1, self.theta2) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                let (lo, hi) = p.theta_range();
                (0.5 * (lo + hi), 0.5 * (lo + hi))
            }
        };
        Ok(p.with_premiums(t1, t2)?)
    }

    pub fn equilibrium_options(&self) -> EquilibriumOptions {
        EquilibriumOptions { tol: self.eq_tol, damping: self.damping, max_iterations: self.eq_max_iterations }
    }

    fn sweep_spec_if_complete(&self) -> Option<SweepSpec> {
        Some(SweepSpec {
            param: self.sweep_param?,
            from: self.sweep_from?,
            to: self.sweep_to?,
            steps: self.sweep_steps?,
            scale: self.sweep_scale,
        })
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, ConfigError> {
        let spec = SweepSpec {
            param: self.sweep_param.ok_or(ConfigError::Missing("sweep_param"))?,
            from: self.sweep_from.ok_or(ConfigError::Missing("sweep_from"))?,
            to: self.sweep_to.ok_or(ConfigError::Missing("sweep_to"))?,
            steps: self.sweep_steps.ok_or(ConfigError::Missing("sweep_steps"))?,
            scale: self.sweep_scale,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Copy with one parameter replaced, revalidated.
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<Self, ConfigError> {
        let mut c = self.clone();
        match param {
            SweepParam::K1 => c.k1 = value,
            SweepParam::K2 => c.k2 = value,
            SweepParam::M => c.m = value,
            SweepParam::Kappa => c.kappa = value,
            SweepParam::Delta => c.delta = value,
            SweepParam::P0 => c.p0 = value,
            SweepParam::Alpha => c.alpha = value,
            SweepParam::Lambda => c.lambda = value,
        }
        // fixed premiums rarely survive a parameter change
        c.theta1 = None;
        c.theta2 = None;
        c.params()?;
        Ok(c)
    }
}
