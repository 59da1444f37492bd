use rayon::prelude::*;

use super::simplex::{self, SimplexOptions};
use super::{LocalMinimum, OptimizationResult};
use crate::cost::{risk_from_indexes, risk_objective};
use crate::model::{Design, Scenario};
use crate::reliability::{system_failure_probability, Indexes};

#[derive(Debug, Clone, Copy)]
pub struct RoOptions {
    /// Seeding grid is `grid_points × grid_points` over `[0, grid_max]²`.
    pub grid_points: usize,
    pub grid_max: f64,
    /// Extra seeds taken from the cheapest grid cells.
    pub best_cells: usize,
    /// Minima closer than this in both λ are merged.
    pub distinct: f64,
    pub simplex: SimplexOptions,
}

impl Default for RoOptions {
    fn default() -> Self {
        Self {
            grid_points: 25,
            grid_max: 3.0,
            best_cells: 8,
            distinct: 0.05,
            simplex: SimplexOptions::default(),
        }
    }
}

fn total(scenario: &Scenario, x: [f64; 2]) -> f64 {
    let d = Design::projected(x[0], x[1]);
    risk_from_indexes(&d, scenario, &Indexes::compute(&d, scenario)).total
}

/// Objective continued outside λ ≥ 0 by projection plus the distance to the
/// feasible set, so the simplex is pulled back instead of drifting.
fn penalized(scenario: &Scenario, x: [f64; 2]) -> f64 {
    let out = (-x[0]).max(0.0) + (-x[1]).max(0.0);
    total(scenario, x) + out
}

fn grid_seeds(scenario: &Scenario, opts: &RoOptions) -> Vec<[f64; 2]> {
    let n = opts.grid_points.max(2);
    let h = opts.grid_max / (n - 1) as f64;
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| total(scenario, [(k / n) as f64 * h, (k % n) as f64 * h]))
        .collect();
    let at = |i: usize, j: usize| values[i * n + j];

    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = at(i, j);
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= n as i64 || jj >= n as i64 {
                        continue;
                    }
                    if at(ii as usize, jj as usize) < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push((i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..n * n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    for &k in order.iter().take(opts.best_cells) {
        let cell = (k / n, k % n);
        if !seeds.contains(&cell) {
            seeds.push(cell);
        }
    }
    seeds
        .into_iter()
        .map(|(i, j)| [i as f64 * h, j as f64 * h])
        .collect()
}

fn refine(scenario: &Scenario, seed: [f64; 2], opts: &SimplexOptions) -> (LocalMinimum, usize) {
    let f = |x: [f64; 2]| penalized(scenario, x);
    let first = simplex::minimize(f, seed, opts);
    // One restart from the reported point guards against a collapsed simplex.
    let second = simplex::minimize(f, first.x, opts);
    let mut x = [second.x[0].max(0.0), second.x[1].max(0.0)];
    let mut best = total(scenario, x);
    // Snap coordinates resting on the bound to exactly zero.
    for k in 0..2 {
        if x[k] > 0.0 && x[k] <= opts.x_tol {
            let mut y = x;
            y[k] = 0.0;
            let v = total(scenario, y);
            if v <= best {
                x = y;
                best = v;
            }
        }
    }
    (
        LocalMinimum {
            design: Design::projected(x[0], x[1]),
            total: best,
            converged: second.converged,
        },
        first.evals + second.evals,
    )
}

fn merge(minima: Vec<LocalMinimum>, distinct: f64) -> Vec<LocalMinimum> {
    let mut sorted = minima;
    sorted.sort_by(|a, b| {
        a.total
            .total_cmp(&b.total)
            .then(a.design.lambda1.total_cmp(&b.design.lambda1))
            .then(a.design.lambda2.total_cmp(&b.design.lambda2))
    });
    let mut out: Vec<LocalMinimum> = Vec::new();
    for m in sorted {
        let dup = out.iter().any(|o| {
            (o.design.lambda1 - m.design.lambda1).abs() <= distinct
                && (o.design.lambda2 - m.design.lambda2).abs() <= distinct
        });
        if !dup {
            out.push(m);
        }
    }
    out
}

/// Multi-start risk optimization with default options.
pub fn ro_optimize(scenario: &Scenario) -> OptimizationResult {
    ro_optimize_with(scenario, &RoOptions::default())
}

pub fn ro_optimize_with(scenario: &Scenario, opts: &RoOptions) -> OptimizationResult {
    let seeds = grid_seeds(scenario, opts);
    let grid_evals = opts.grid_points.max(2).pow(2);
    let refined: Vec<(LocalMinimum, usize)> = seeds
        .par_iter()
        .map(|&s| refine(scenario, s, &opts.simplex))
        .collect();
    let evaluations = grid_evals + refined.iter().map(|r| r.1).sum::<usize>();
    let mut minima: Vec<LocalMinimum> = refined.into_iter().map(|r| r.0).collect();

    if scenario.is_symmetric() {
        let mirrored: Vec<_> = minima
            .iter()
            .map(|m| LocalMinimum {
                design: m.design.swapped(),
                total: risk_objective(&m.design.swapped(), scenario).total,
                converged: m.converged,
            })
            .collect();
        minima.extend(mirrored);
    }
    let converged_any = minima.iter().any(|m| m.converged);
    let unconverged_seeds =
        seeds.len() - minima[..seeds.len()].iter().filter(|m| m.converged).count();
    let pool: Vec<LocalMinimum> = if converged_any {
        minima.into_iter().filter(|m| m.converged).collect()
    } else {
        minima
    };
    let local_minima = merge(pool, opts.distinct);

    let mut best = local_minima[0].design;
    if scenario.is_symmetric() && best.lambda1 > best.lambda2 {
        best = best.swapped();
    }
    OptimizationResult {
        best,
        breakdown: system_failure_probability(&best, scenario),
        costs: risk_objective(&best, scenario),
        local_minima,
        evaluations,
        converged: converged_any,
        unconverged_seeds,
    }
}
