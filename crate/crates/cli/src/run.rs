//! Library side of every subcommand; the binary only parses flags, prints
//! and picks exit codes.

use std::io::Write;

use rayon::prelude::*;
use underreport::{
    check_corollary_b1, check_prop41, check_theorem42, conditions::sweep_verdicts, BarrierSolution, Company,
    ConditionReport, EquilibriumResult,
};

use crate::config::{ConfigError, RunConfig, SweepParam, SweepSpec};
use crate::format::{flag, sig9};

pub const SWEEP_HEADER: [&str; 14] = [
    "param",
    "param_value",
    "theta1_star",
    "theta2_star",
    "diff",
    "barrier",
    "J1",
    "J2",
    "iterations",
    "converged",
    "thm42_i",
    "thm42_ii",
    "thm42_iii",
    "prop41",
];

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Model(underreport::Error),
}

impl From<underreport::Error> for RunError {
    fn from(e: underreport::Error) -> Self {
        match e {
            underreport::Error::NoConvergence { iterations, residual } => RunError::NoConvergence { iterations, residual },
            underreport::Error::InvalidParameter { .. } => RunError::Config(e.into()),
            other => RunError::Model(other),
        }
    }
}

/// One equilibrium solve in the sweep/equilibrium CSV schema.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: Option<SweepParam>,
    pub param_value: Option<f64>,
    pub equilibrium: EquilibriumResult,
    /// Existence (i), (ii), (iii) and the ordering condition.
    pub verdicts: [bool; 4],
}

impl SweepRow {
    pub fn diff(&self) -> f64 {
        self.equilibrium.theta1 - self.equilibrium.theta2
    }

    pub fn record(&self) -> Vec<String> {
        let e = &self.equilibrium;
        vec![
            self.param.map(|p| p.name().to_string()).unwrap_or_default(),
            self.param_value.map(sig9).unwrap_or_default(),
            sig9(e.theta1),
            sig9(e.theta2),
            sig9(self.diff()),
            sig9(e.barrier),
            sig9(e.profits[0]),
            sig9(e.profits[1]),
            e.iterations.to_string(),
            flag(e.converged).into(),
            flag(self.verdicts[0]).into(),
            flag(self.verdicts[1]).into(),
            flag(self.verdicts[2]).into(),
            flag(self.verdicts[3]).into(),
        ]
    }
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_rows<W: Write>(w: W, rows: &[SweepRow]) -> Result<(), RunError> {
    let mut out = csv_writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in rows {
        out.write_record(r.record())?;
    }
    out.flush()?;
    Ok(())
}

pub fn equilibrium_row(cfg: &RunConfig, param: Option<(SweepParam, f64)>) -> Result<SweepRow, RunError> {
    let params = cfg.params()?;
    let equilibrium = params.nash_equilibrium(cfg.equilibrium_options())?;
    Ok(SweepRow {
        param: param.map(|p| p.0),
        param_value: param.map(|p| p.1),
        equilibrium,
        verdicts: sweep_verdicts(&params),
    })
}

/// Every grid point is validated before any solve; rows come back in grid
/// order regardless of `jobs`. Non-convergence stays in-row.
pub fn sweep(cfg: &RunConfig, spec: &SweepSpec, jobs: Option<usize>) -> Result<Vec<SweepRow>, RunError> {
    let points = spec
        .grid()
        .into_iter()
        .map(|v| cfg.with_param(spec.param, v).map(|c| (v, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| std::io::Error::other(e.to_string()))?;
    pool.install(|| {
        points
            .par_iter()
            .map(|(v, c)| equilibrium_row(c, Some((spec.param, *v))))
            .collect::<Result<Vec<_>, _>>()
    })
}

/// Closed-form barrier next to the value-iteration solution.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub theta: (f64, f64),
    pub closed_form: f64,
    pub solution: BarrierSolution,
}

impl SolveReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.solution.policy.as_slice().iter().map(|b| (b - self.closed_form).abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), RunError> {
        let mut out = csv_writer(w);
        out.write_record(["class", "company", "value", "barrier_vi", "barrier_closed_form"])?;
        for company in 0..2 {
            for class in 0..2 {
                out.write_record([
                    (class + 1).to_string(),
                    (company + 1).to_string(),
                    sig9(self.solution.values.get(class, company)),
                    sig9(self.solution.policy.get(class, company)),
                    sig9(self.closed_form),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

pub fn solve(cfg: &RunConfig) -> Result<SolveReport, RunError> {
    let p = cfg.params_at_premiums()?;
    let model = p.market_model()?;
    let solution = model.solve_optimal_barrier_capped(cfg.vi_tol, cfg.vi_max_iterations)?;
    Ok(SolveReport { theta: (p.theta1(), p.theta2()), closed_form: p.closed_form_barrier(), solution })
}

/// Existence, ordering and Gamma-specific reports, in that order.
pub fn check(cfg: &RunConfig) -> Result<Vec<ConditionReport>, RunError> {
    let p = cfg.params()?;
    Ok(vec![check_theorem42(&p), check_prop41(&p), check_corollary_b1(&p)?])
}

pub fn write_check_csv<W: Write>(w: W, reports: &[ConditionReport]) -> Result<(), RunError> {
    let mut out = csv_writer(w);
    out.write_record(["report", "kind", "name", "value", "lower", "upper", "holds"])?;
    for r in reports {
        for (name, v) in &r.quantities {
            out.write_record([r.title, "quantity", name, &sig9(*v), "", "", ""])?;
        }
        for c in &r.checks {
            let (lo, hi) = match c.bound {
                underreport::Bound::AtMost(b) => (String::new(), sig9(b)),
                underreport::Bound::AtLeast(b) => (sig9(b), String::new()),
                underreport::Bound::Within(a, b) => (sig9(a), sig9(b)),
            };
            out.write_record([r.title, "check", c.name, &sig9(c.lhs), &lo, &hi, flag(c.holds)])?;
        }
        out.write_record([r.title, "overall", "overall", "", "", "", flag(r.overall())])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRow {
    pub quantity: &'static str,
    pub empirical: f64,
    pub standard_error: f64,
    pub analytic: f64,
}

impl SimulationRow {
    pub fn z(&self) -> f64 {
        (self.empirical - self.analytic) / self.standard_error
    }
}

#[derive(Debug, Clone)]
pub struct SimulationComparison {
    pub theta: (f64, f64),
    pub barrier: f64,
    pub horizon: usize,
    pub seed: u64,
    pub rows: Vec<SimulationRow>,
}

impl SimulationComparison {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), RunError> {
        let mut out = csv_writer(w);
        out.write_record(["quantity", "empirical", "std_error", "analytic", "z"])?;
        for r in &self.rows {
            out.write_record([r.quantity, &sig9(r.empirical), &sig9(r.standard_error), &sig9(r.analytic), &sig9(r.z())])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Simulates at the configured premiums, or at the equilibrium when the
/// config fixes none, under the closed-form barrier.
pub fn simulate(cfg: &RunConfig) -> Result<SimulationComparison, RunError> {
    let base = cfg.params()?;
    let p = match (cfg.theta1, cfg.theta2) {
        (Some(_), Some(_)) => cfg.params_at_premiums()?,
        _ => {
            let eq = base.nash_equilibrium(cfg.equilibrium_options())?;
            if !eq.converged {
                return Err(RunError::NoConvergence { iterations: eq.iterations, residual: eq.residual });
            }
            base.with_premiums(eq.theta1, eq.theta2)?
        }
    };
    let barrier = p.closed_form_barrier();
    let sim = p.simulate_chain(barrier, cfg.horizon, cfg.seed)?;
    let dist = p.stationary_distribution()?;
    let names = ["p11", "p21", "p12", "p22"];
    let mut rows: Vec<SimulationRow> = (0..4)
        .map(|s| SimulationRow {
            quantity: names[s],
            empirical: sim.frequencies[s],
            standard_error: sim.frequency_se[s],
            analytic: dist.p[s],
        })
        .collect();
    for (k, (name, c)) in [("J1", Company::One), ("J2", Company::Two)].into_iter().enumerate() {
        rows.push(SimulationRow {
            quantity: name,
            empirical: sim.profits[k],
            standard_error: sim.profit_se[k],
            analytic: p.reduced_profit(c),
        });
    }
    Ok(SimulationComparison { theta: (p.theta1(), p.theta2()), barrier, horizon: cfg.horizon, seed: cfg.seed, rows })
}
