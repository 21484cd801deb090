use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use underreport_cli::config::{ConfigError, RunConfig, Scale, SweepParam, ThetaBoundName};
use underreport_cli::format::sig9;
use underreport_cli::run::{self, RunError};

const EXIT_CONFIG: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "underreport", version, about = "Bonus-malus underreporting and duopoly premium equilibria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal barrier: closed form against value iteration.
    Solve(Common),
    /// Nash equilibrium premiums, one CSV row.
    Equilibrium(Common),
    /// Equilibrium over a parameter grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepFlags,
    },
    /// Sufficient-condition reports (advisory; never fails).
    Check(Common),
    /// Monte-Carlo chain against the stationary law.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Number of simulated periods.
        #[arg(long)]
        horizon: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum)]
    theta_bound: Option<BoundFlag>,
}

#[derive(Args)]
struct SweepFlags {
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    scale: Option<ScaleFlag>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundFlag {
    M,
    MOverKappa,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleFlag {
    Linear,
    Log,
}

fn load(common: &Common) -> Result<RunConfig, RunError> {
    let mut cfg = RunConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(b) = common.theta_bound {
        cfg.theta_bound = match b {
            BoundFlag::M => ThetaBoundName::M,
            BoundFlag::MOverKappa => ThetaBoundName::MOverKappa,
        };
    }
    if common.out.is_some() {
        cfg.output = common.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Human-readable text goes to stderr when the CSV goes to stdout.
fn report_stream(cfg: &RunConfig) -> Box<dyn Write> {
    if cfg.output.is_some() {
        Box::new(io::stdout())
    } else {
        Box::new(io::stderr())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                RunError::Config(_) => ExitCode::from(EXIT_CONFIG),
                RunError::NoConvergence { .. } => ExitCode::from(EXIT_NO_CONVERGENCE),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, RunError> {
    match command {
        Command::Solve(common) => cmd_solve(&load(&common)?),
        Command::Equilibrium(common) => cmd_equilibrium(&load(&common)?),
        Command::Sweep { common, sweep } => {
            let mut cfg = load(&common)?;
            apply_sweep_flags(&mut cfg, &sweep)?;
            cmd_sweep(&cfg, common.jobs)
        }
        Command::Check(common) => cmd_check(&load(&common)?),
        Command::Simulate { common, horizon } => {
            let mut cfg = load(&common)?;
            if let Some(h) = horizon {
                cfg.horizon = h;
                cfg.validate()?;
            }
            cmd_simulate(&cfg)
        }
    }
}

fn apply_sweep_flags(cfg: &mut RunConfig, f: &SweepFlags) -> Result<(), RunError> {
    if let Some(name) = &f.param {
        let p = SweepParam::parse(name).ok_or_else(|| ConfigError::Invalid {
            field: "param".into(),
            value: f64::NAN,
            expected: format!("one of k1, k2, M, kappa, delta, p0, alpha, lambda (got {name:?})"),
        })?;
        cfg.sweep_param = Some(p);
    }
    cfg.sweep_from = f.from.or(cfg.sweep_from);
    cfg.sweep_to = f.to.or(cfg.sweep_to);
    cfg.sweep_steps = f.steps.or(cfg.sweep_steps);
    if let Some(s) = f.scale {
        cfg.sweep_scale = match s {
            ScaleFlag::Linear => Scale::Linear,
            ScaleFlag::Log => Scale::Log,
        };
    }
    Ok(())
}

fn cmd_solve(cfg: &RunConfig) -> Result<ExitCode, RunError> {
    let r = run::solve(cfg)?;
    let mut text = report_stream(cfg);
    writeln!(text, "premiums: theta1 = {}, theta2 = {}", r.theta.0, r.theta.1)?;
    writeln!(text, "closed-form barrier: {}", r.closed_form)?;
    writeln!(text, "value iteration: {} iterations, final step {:e}", r.solution.iterations, r.solution.residuals.last().copied().unwrap_or(0.0))?;
    for company in 0..2 {
        for class in 0..2 {
            writeln!(
                text,
                "  class {} company {}: V* = {}, barrier = {}",
                class + 1,
                company + 1,
                r.solution.values.get(class, company),
                r.solution.policy.get(class, company)
            )?;
        }
    }
    writeln!(text, "max |closed form - value iteration| = {:e}", r.max_discrepancy())?;
    if cfg.output.is_some() {
        r.write_csv(output(cfg)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_banner(text: &mut dyn Write, cfg: &RunConfig) -> Result<(), RunError> {
    let reports = run::check(cfg)?;
    let failed: Vec<&str> = reports[..2]
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.holds).map(|c| c.name))
        .collect();
    if failed.is_empty() {
        writeln!(text, "sufficient conditions: all hold")?;
    } else {
        writeln!(
            text,
            "note: sufficient conditions fail ({}); the fixed point below is reported as found, not certified",
            failed.join("; ")
        )?;
    }
    Ok(())
}

fn cmd_equilibrium(cfg: &RunConfig) -> Result<ExitCode, RunError> {
    let row = run::equilibrium_row(cfg, None)?;
    let e = &row.equilibrium;
    let mut text = report_stream(cfg);
    print_banner(&mut *text, cfg)?;
    writeln!(text, "theta1* = {}", e.theta1)?;
    writeln!(text, "theta2* = {}", e.theta2)?;
    writeln!(text, "ordering: {}", e.ordering.label())?;
    writeln!(text, "barrier = {}, J1 = {}, J2 = {}", e.barrier, e.profits[0], e.profits[1])?;
    writeln!(text, "iterations = {}, residual = {:e}, converged = {}", e.iterations, e.residual, e.converged)?;
    drop(text);
    run::write_rows(output(cfg)?, std::slice::from_ref(&row))?;
    if !e.converged {
        eprintln!("error: equilibrium iteration did not converge (residual {:e})", e.residual);
        return Ok(ExitCode::from(EXIT_NO_CONVERGENCE));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(cfg: &RunConfig, jobs: Option<usize>) -> Result<ExitCode, RunError> {
    let spec = cfg.sweep_spec()?;
    let rows = run::sweep(cfg, &spec, jobs)?;
    let unconverged = rows.iter().filter(|r| !r.equilibrium.converged).count();
    run::write_rows(output(cfg)?, &rows)?;
    let mut text = report_stream(cfg);
    writeln!(text, "{} rows over {} in [{}, {}]", rows.len(), spec.param, spec.from, spec.to)?;
    if unconverged > 0 {
        writeln!(text, "warning: {unconverged} grid points did not converge (converged=false in-row)")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(cfg: &RunConfig) -> Result<ExitCode, RunError> {
    let reports = run::check(cfg)?;
    let mut text = report_stream(cfg);
    for r in &reports {
        writeln!(text, "{r}")?;
    }
    writeln!(text, "(conditions are sufficient, not necessary)")?;
    drop(text);
    if cfg.output.is_some() {
        run::write_check_csv(output(cfg)?, &reports)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(cfg: &RunConfig) -> Result<ExitCode, RunError> {
    let c = run::simulate(cfg)?;
    let mut text = report_stream(cfg);
    writeln!(text, "premiums ({}, {}), barrier {}, horizon {}, seed {}", c.theta.0, c.theta.1, c.barrier, c.horizon, c.seed)?;
    writeln!(text, "{:>8} {:>14} {:>14} {:>14} {:>8}", "quantity", "empirical", "std error", "analytic", "z")?;
    for r in &c.rows {
        writeln!(
            text,
            "{:>8} {:>14} {:>14} {:>14} {:>8}",
            r.quantity,
            sig9(r.empirical),
            sig9(r.standard_error),
            sig9(r.analytic),
            format!("{:.2}", r.z())
        )?;
    }
    drop(text);
    c.write_csv(output(cfg)?)?;
    Ok(ExitCode::SUCCESS)
}
