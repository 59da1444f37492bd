//! Risk optimization and system RBDO over the design (λ1, λ2).

mod rbdo;
mod ro;
pub mod simplex;

pub use rbdo::{rbdo_frontier, rbdo_optimize, FrontierOptions, FrontierPoint, RbdoOutcome};
pub use ro::{ro_optimize, ro_optimize_with, RoOptions};

use serde::Serialize;

use crate::cost::CostBreakdown;
use crate::model::Design;
use crate::reliability::ReliabilityBreakdown;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalMinimum {
    pub design: Design,
    pub total: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub best: Design,
    pub breakdown: ReliabilityBreakdown,
    pub costs: CostBreakdown,
    /// Distinct local minima, cheapest first.
    pub local_minima: Vec<LocalMinimum>,
    pub evaluations: usize,
    pub converged: bool,
    /// Seeds whose refinement hit the evaluation budget.
    pub unconverged_seeds: usize,
}
