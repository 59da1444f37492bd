use rayon::prelude::*;
use serde::Serialize;

use super::{LocalMinimum, OptimizationResult};
use crate::cost::{material_cost, risk_objective};
use crate::error::{Error, Result};
use crate::model::{Design, Scenario};
use crate::reliability::system_failure_probability;

#[derive(Debug, Clone, Copy)]
pub struct FrontierOptions {
    /// Upper end of the λ2 search bracket.
    pub lambda_max: f64,
    /// Bisection stops once the bracket is this narrow.
    pub tol: f64,
    /// Uniform scan steps over [0, λ_max] before bisection.
    pub scan_steps: usize,
    /// λ1 grid points used by [`rbdo_optimize`].
    pub lambda1_points: usize,
}

impl Default for FrontierOptions {
    fn default() -> Self {
        Self {
            lambda_max: 10.0,
            tol: 1e-5,
            scan_steps: 400,
            lambda1_points: 401,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontierPoint {
    pub lambda1: f64,
    /// Smallest λ2 meeting the target, `None` when nothing up to λ_max does.
    pub lambda2_required: Option<f64>,
    pub beta_sys_achieved: f64,
    pub feasible: bool,
    /// β_sys decreased somewhere in λ2 below the crossing.
    pub non_monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RbdoOutcome {
    Optimal(OptimizationResult),
    /// The target is met with no material at all.
    Degenerate(OptimizationResult),
    Infeasible {
        max_beta_sys: f64,
        at: Design,
    },
}

fn beta_sys(scenario: &Scenario, l1: f64, l2: f64) -> f64 {
    system_failure_probability(&Design::projected(l1, l2), scenario).beta_sys
}

fn frontier_point(
    scenario: &Scenario,
    beta_t: f64,
    lambda1: f64,
    o: &FrontierOptions,
) -> FrontierPoint {
    let point = |l2: Option<f64>, beta: f64, non_monotone| FrontierPoint {
        lambda1,
        lambda2_required: l2,
        beta_sys_achieved: beta,
        feasible: l2.is_some(),
        non_monotone,
    };
    let b0 = beta_sys(scenario, lambda1, 0.0);
    if b0 >= beta_t {
        return point(Some(0.0), b0, false);
    }
    let h = o.lambda_max / o.scan_steps as f64;
    let mut prev = (0.0, b0);
    let mut non_monotone = false;
    let mut best = b0;
    for k in 1..=o.scan_steps {
        let l2 = k as f64 * h;
        let b = beta_sys(scenario, lambda1, l2);
        if b < prev.1 - 1e-9 {
            non_monotone = true;
        }
        if b >= beta_t {
            let (mut lo, mut hi, mut b_hi) = (prev.0, l2, b);
            while hi - lo > o.tol {
                let mid = 0.5 * (lo + hi);
                let bm = beta_sys(scenario, lambda1, mid);
                if bm >= beta_t {
                    hi = mid;
                    b_hi = bm;
                } else {
                    lo = mid;
                }
            }
            return point(Some(hi), b_hi, non_monotone);
        }
        best = best.max(b);
        prev = (l2, b);
    }
    point(None, best, non_monotone)
}

fn check_target(beta_t: f64) -> Result<()> {
    if beta_t.is_nan() {
        return Err(Error::Domain("target reliability index is NaN".into()));
    }
    Ok(())
}

/// Minimal λ2 meeting β_sys ≥ β_T for each λ1 of `lambda1_grid`.
pub fn rbdo_frontier(
    scenario: &Scenario,
    beta_t: f64,
    lambda1_grid: &[f64],
    opts: &FrontierOptions,
) -> Result<Vec<FrontierPoint>> {
    check_target(beta_t)?;
    if lambda1_grid.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return Err(Error::Domain(
            "λ1 grid must be finite and nonnegative".into(),
        ));
    }
    if lambda1_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("λ1 grid must be strictly ascending".into()));
    }
    Ok(lambda1_grid
        .par_iter()
        .map(|&l1| frontier_point(scenario, beta_t, l1, opts))
        .collect())
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, usize) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc <= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

fn result(
    scenario: &Scenario,
    best: Design,
    local_minima: Vec<LocalMinimum>,
    evaluations: usize,
) -> OptimizationResult {
    OptimizationResult {
        best,
        breakdown: system_failure_probability(&best, scenario),
        costs: risk_objective(&best, scenario),
        local_minima,
        evaluations,
        converged: true,
        unconverged_seeds: 0,
    }
}

/// Least material cost design with β_sys ≥ β_T.
pub fn rbdo_optimize(
    scenario: &Scenario,
    beta_t: f64,
    opts: &FrontierOptions,
) -> Result<RbdoOutcome> {
    check_target(beta_t)?;
    let zero = Design::projected(0.0, 0.0);
    if beta_sys(scenario, 0.0, 0.0) >= beta_t {
        return Ok(RbdoOutcome::Degenerate(result(
            scenario,
            zero,
            vec![LocalMinimum {
                design: zero,
                total: 0.0,
                converged: true,
            }],
            1,
        )));
    }

    let n = opts.lambda1_points.max(2);
    let h = opts.lambda_max / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
    let frontier = rbdo_frontier(scenario, beta_t, &grid, opts)?;
    let mut evaluations = n * (opts.scan_steps + 20);

    let cost_of = |p: &FrontierPoint| {
        p.lambda2_required
            .map(|l2| material_cost(&Design::projected(p.lambda1, l2), scenario))
    };
    let costs: Vec<Option<f64>> = frontier.iter().map(cost_of).collect();
    if costs.iter().all(Option::is_none) {
        let (max_beta_sys, at) = max_attainable(scenario, opts);
        return Ok(RbdoOutcome::Infeasible { max_beta_sys, at });
    }

    // Local minima of material cost along the feasible frontier.
    let mut seeds = Vec::new();
    for k in 0..n {
        let Some(c) = costs[k] else { continue };
        let left = k.checked_sub(1).and_then(|j| costs[j]);
        let right = costs.get(k + 1).copied().flatten();
        if left.is_none_or(|l| c <= l) && right.is_none_or(|r| c <= r) {
            seeds.push(k);
        }
    }

    let along = |l1: f64| {
        let p = frontier_point(scenario, beta_t, l1.max(0.0), opts);
        cost_of(&p).unwrap_or(f64::INFINITY)
    };
    let mut minima: Vec<LocalMinimum> = Vec::new();
    for k in seeds {
        let lo = grid[k.saturating_sub(1)];
        let hi = grid[(k + 1).min(n - 1)];
        let (l1, c, e) = golden_section(along, lo, hi, 1e-6);
        evaluations += e * (opts.scan_steps + 20);
        let (l1, c) = if c <= costs[k].unwrap() {
            (l1, c)
        } else {
            (grid[k], costs[k].unwrap())
        };
        let p = frontier_point(scenario, beta_t, l1, opts);
        if let Some(l2) = p.lambda2_required {
            minima.push(LocalMinimum {
                design: Design::projected(l1, l2),
                total: c,
                converged: true,
            });
        }
    }
    minima.sort_by(|a, b| a.total.total_cmp(&b.total));
    let mut distinct: Vec<LocalMinimum> = Vec::new();
    for m in minima {
        if !distinct.iter().any(|d| {
            (d.design.lambda1 - m.design.lambda1).abs() <= 0.05
                && (d.design.lambda2 - m.design.lambda2).abs() <= 0.05
        }) {
            distinct.push(m);
        }
    }
    let mut best = distinct[0].design;
    if scenario.is_symmetric() && best.lambda1 > best.lambda2 {
        best = best.swapped();
    }
    let r = result(scenario, best, distinct, evaluations);
    Ok(if best.is_degenerate() {
        RbdoOutcome::Degenerate(r)
    } else {
        RbdoOutcome::Optimal(r)
    })
}

fn max_attainable(scenario: &Scenario, opts: &FrontierOptions) -> (f64, Design) {
    let n = 101;
    let h = opts.lambda_max / (n - 1) as f64;
    (0..n * n)
        .into_par_iter()
        .map(|k| {
            let d = Design::projected((k / n) as f64 * h, (k % n) as f64 * h);
            (system_failure_probability(&d, scenario).beta_sys, d)
        })
        .reduce(
            || (f64::NEG_INFINITY, Design::projected(0.0, 0.0)),
            |a, b| if b.0 > a.0 { b } else { a },
        )
}
