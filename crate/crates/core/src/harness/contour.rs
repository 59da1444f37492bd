//! Plot-ready grids of β_sys or total expected cost over (λ1, λ2).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::risk_objective;
use crate::error::{Error, Result};
use crate::model::{Design, Scenario};
use crate::reliability::system_failure_probability;

pub const MAX_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    BetaSys,
    RoTotal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, step: f64) -> Self {
        Self { min, max, step }
    }

    fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    fn at(&self, k: usize) -> f64 {
        self.min + k as f64 * self.step
    }

    fn check(&self, name: &str) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Input(format!(
                "{name} step must be > 0, got {}",
                self.step
            )));
        }
        if !(self.min >= 0.0 && self.max >= self.min && self.max.is_finite()) {
            return Err(Error::Input(format!(
                "{name} range must satisfy 0 ≤ min ≤ max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lambda1: Axis,
    pub lambda2: Axis,
    pub quantity: Quantity,
}

impl GridSpec {
    pub fn cells(&self) -> usize {
        self.lambda1.len().saturating_mul(self.lambda2.len())
    }
}

/// `(λ1, λ2, value)` triples, λ1 outer, λ2 inner.
pub fn run_contour(scenario: &Scenario, grid: &GridSpec) -> Result<Vec<(f64, f64, f64)>> {
    grid.lambda1.check("lambda1")?;
    grid.lambda2.check("lambda2")?;
    let cells = grid.cells();
    if cells > MAX_CELLS {
        return Err(Error::Input(format!(
            "grid has {cells} cells, limit is {MAX_CELLS}"
        )));
    }
    let n2 = grid.lambda2.len();
    Ok((0..cells)
        .into_par_iter()
        .map(|k| {
            let l1 = grid.lambda1.at(k / n2);
            let l2 = grid.lambda2.at(k % n2);
            let d = Design::projected(l1, l2);
            let v = match grid.quantity {
                Quantity::BetaSys => system_failure_probability(&d, scenario).beta_sys,
                Quantity::RoTotal => risk_objective(&d, scenario).total,
            };
            (l1, l2, v)
        })
        .collect())
}

pub fn contour_csv(points: &[(f64, f64, f64)], quantity: Quantity) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let name = match quantity {
        Quantity::BetaSys => "beta_sys",
        Quantity::RoTotal => "ro_total",
    };
    w.write_record(["lambda1", "lambda2", name])
        .map_err(super::csv_err)?;
    for &(a, b, v) in points {
        w.write_record([super::num(a), super::num(b), super::num(v)])
            .map_err(super::csv_err)?;
    }
    super::finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ScenarioConfig;

    #[test]
    fn rejects_bad_grids() {
        let s = ScenarioConfig::default().validate().unwrap();
        let ok = Axis::new(0.0, 1.0, 0.5);
        let bad_step = GridSpec {
            lambda1: Axis::new(0.0, 1.0, 0.0),
            lambda2: ok,
            quantity: Quantity::BetaSys,
        };
        assert!(run_contour(&s, &bad_step).is_err());
        let huge = GridSpec {
            lambda1: Axis::new(0.0, 10.0, 1e-3),
            lambda2: Axis::new(0.0, 10.0, 1e-3),
            quantity: Quantity::BetaSys,
        };
        assert!(huge.cells() > MAX_CELLS);
        assert!(run_contour(&s, &huge).is_err());
    }

    #[test]
    fn row_major_and_inclusive() {
        let s = ScenarioConfig::default().validate().unwrap();
        let g = GridSpec {
            lambda1: Axis::new(0.0, 1.0, 0.5),
            lambda2: Axis::new(0.0, 0.3, 0.1),
            quantity: Quantity::RoTotal,
        };
        let pts = run_contour(&s, &g).unwrap();
        assert_eq!(pts.len(), 12);
        assert_eq!((pts[0].0, pts[0].1), (0.0, 0.0));
        assert_eq!(pts[1].0, 0.0);
        assert!((pts[3].1 - 0.3).abs() < 1e-12);
        assert_eq!(pts[4].0, 0.5);
    }
}
