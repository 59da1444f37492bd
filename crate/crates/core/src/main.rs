use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use redundancy_core::harness::{self, Axis, GridSpec, Quantity, SweepSpec};
use redundancy_core::model::{Design, Scenario, ScenarioConfig};
use redundancy_core::optimize::{
    rbdo_frontier, rbdo_optimize, ro_optimize, FrontierOptions, OptimizationResult, RbdoOutcome,
};
use redundancy_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "redundancy",
    version,
    about = "Reliability and risk-optimal design of two-bar redundant systems"
)]
struct Cli {
    /// Scenario (or sweep spec) JSON; the built-in default scenario if omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout if omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 20_240_601)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Re-run a published table and report per-cell deviations.
    Reproduce {
        #[arg(long)]
        table: u32,
    },
    /// Optimize every combination of a sweep spec (`--config` is the spec).
    Sweep,
    /// Risk optimization of one scenario.
    Ro,
    /// Least-material design meeting a system reliability target.
    Rbdo(RbdoArgs),
    /// Grid of β_sys or total expected cost.
    Contour(ContourArgs),
    /// Closed form against Monte Carlo at one design.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct RbdoArgs {
    #[arg(long, allow_hyphen_values = true)]
    beta_target: f64,
    /// Emit the frontier λ2_required(λ1) over this λ1 step instead of the optimum.
    #[arg(long)]
    frontier_step: Option<f64>,
    #[arg(long, default_value_t = 3.0)]
    frontier_max: f64,
    #[arg(long, default_value_t = 10.0)]
    lambda_max: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuantityArg {
    BetaSys,
    RoTotal,
}

#[derive(Args, Debug)]
struct ContourArgs {
    #[arg(long, value_enum, default_value = "ro-total")]
    quantity: QuantityArg,
    #[arg(long, default_value_t = 0.0)]
    min: f64,
    #[arg(long, default_value_t = 3.0)]
    max: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    lambda1: f64,
    #[arg(long)]
    lambda2: f64,
    #[arg(long, default_value_t = 10_000_000)]
    samples: u64,
}

/// Exit statuses: success, tolerance failure, input error.
const TOLERANCE: u8 = 1;
const INPUT: u8 = 2;

fn scenario(config: Option<&Path>) -> Result<Scenario> {
    let cfg = match config {
        Some(p) => ScenarioConfig::from_path(p)
            .with_context(|| format!("reading scenario {}", p.display()))?,
        None => ScenarioConfig::default(),
    };
    Ok(cfg.validate()?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn result_csv(label: &str, r: &OptimizationResult) -> String {
    let b = &r.breakdown;
    let c = &r.costs;
    let mut s = String::from(
        "kind,lambda1,lambda2,a1,a2,beta1,beta21,beta_joint,beta_sys,p_sys,material,sf,pc,dc,total\n",
    );
    s += &format!(
        "{label},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        r.best.lambda1,
        r.best.lambda2,
        b.indexes.a1,
        b.indexes.a2,
        b.beta1(),
        b.beta_21(),
        b.beta_joint(),
        b.beta_sys,
        b.p_sys,
        c.material,
        c.sf,
        c.pc,
        c.dc,
        c.total
    );
    for m in &r.local_minima {
        s += &format!(
            "local_minimum,{},{},,,,,,,,,,,,{}\n",
            m.design.lambda1, m.design.lambda2, m.total
        );
    }
    s
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let out = cli.out.as_deref();
    let config = cli.config.as_deref();
    match cli.command {
        Command::Reproduce { table } => {
            let report = harness::run_reproduce(table)?;
            emit(out, &harness::reproduce_csv(&report)?)?;
            for (col, cell) in report.failures() {
                eprintln!(
                    "table {} column {}: {} = {:.4}, published {:.4}, tolerance {}",
                    col.table,
                    col.column,
                    cell.quantity,
                    cell.computed,
                    cell.published,
                    cell.tolerance
                );
            }
            Ok(if report.pass() { 0 } else { TOLERANCE })
        }
        Command::Sweep => {
            let path = config.context("sweep needs --config <spec.json>")?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading sweep spec {}", path.display()))?;
            let spec = SweepSpec::from_json(&text)?;
            let rows = harness::run_sweep(&spec)?;
            emit(out, &harness::sweep_csv(&rows)?)?;
            Ok(0)
        }
        Command::Ro => {
            let s = scenario(config)?;
            emit(out, &result_csv("optimum", &ro_optimize(&s)))?;
            Ok(0)
        }
        Command::Rbdo(a) => {
            let s = scenario(config)?;
            let opts = FrontierOptions {
                lambda_max: a.lambda_max,
                ..FrontierOptions::default()
            };
            if let Some(step) = a.frontier_step {
                if step.is_nan() || step <= 0.0 {
                    return Err(
                        Error::Input(format!("frontier step must be > 0, got {step}")).into(),
                    );
                }
                let n = (a.frontier_max / step + 1e-9).floor() as usize + 1;
                let grid: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
                let pts = rbdo_frontier(&s, a.beta_target, &grid, &opts)?;
                let mut text =
                    String::from("lambda1,lambda2_required,beta_sys,feasible,non_monotone\n");
                for p in pts {
                    text += &format!(
                        "{},{},{},{},{}\n",
                        p.lambda1,
                        p.lambda2_required
                            .map(|v| v.to_string())
                            .unwrap_or_default(),
                        p.beta_sys_achieved,
                        p.feasible,
                        p.non_monotone
                    );
                }
                emit(out, &text)?;
                return Ok(0);
            }
            match rbdo_optimize(&s, a.beta_target, &opts)? {
                RbdoOutcome::Optimal(r) => emit(out, &result_csv("optimum", &r))?,
                RbdoOutcome::Degenerate(r) => emit(out, &result_csv("degenerate", &r))?,
                RbdoOutcome::Infeasible { max_beta_sys, at } => {
                    emit(
                        out,
                        &format!(
                            "kind,lambda1,lambda2,beta_sys\ninfeasible,{},{},{}\n",
                            at.lambda1, at.lambda2, max_beta_sys
                        ),
                    )?;
                    eprintln!(
                        "target β_sys = {} is not attainable; best found {max_beta_sys:.4}",
                        a.beta_target
                    );
                    return Ok(TOLERANCE);
                }
            }
            Ok(0)
        }
        Command::Contour(a) => {
            let s = scenario(config)?;
            let quantity = match a.quantity {
                QuantityArg::BetaSys => Quantity::BetaSys,
                QuantityArg::RoTotal => Quantity::RoTotal,
            };
            let axis = Axis::new(a.min, a.max, a.step);
            let grid = GridSpec {
                lambda1: axis,
                lambda2: axis,
                quantity,
            };
            let pts = harness::run_contour(&s, &grid)?;
            emit(out, &harness::contour_csv(&pts, quantity)?)?;
            Ok(0)
        }
        Command::Validate(a) => {
            let s = scenario(config)?;
            let design = Design::new(a.lambda1, a.lambda2)?;
            let report = harness::run_validate(&s, &design, a.samples, cli.seed)?;
            emit(out, &harness::validate_csv(&report)?)?;
            for note in report.notes() {
                eprintln!("note: {note}");
            }
            Ok(if report.pass() { 0 } else { TOLERANCE })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT)
        }
    }
}
