//! Published results, bundled as TOML.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{Material, RedundancyKind, ScenarioConfig};

pub const PUBLISHED_TABLES: &str = include_str!("../../fixtures/published_tables.toml");

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct Tolerances {
    pub lambda: f64,
    pub beta: f64,
    pub cost: f64,
    pub sf: f64,
    pub total: f64,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnTolerance {
    pub beta1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Column {
    pub eta: f64,
    pub impact: f64,
    pub p_latent: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub a1: f64,
    pub a2: f64,
    pub beta1: f64,
    pub beta21: f64,
    pub beta_joint: f64,
    pub beta_sys: f64,
    pub material: f64,
    pub sf: f64,
    pub pc: f64,
    pub dc: f64,
    pub total: f64,
    #[serde(default)]
    pub tolerance: ColumnTolerance,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table {
    pub id: u32,
    pub title: String,
    pub mu1: f64,
    pub mu2: f64,
    pub cov1: f64,
    pub cov2: f64,
    pub redundancy: RedundancyKind,
    #[serde(rename = "column")]
    pub columns: Vec<Column>,
}

impl Table {
    /// Scenario for one column; everything not tabulated takes the defaults.
    pub fn scenario(&self, column: &Column) -> ScenarioConfig {
        let base = ScenarioConfig::default();
        ScenarioConfig {
            material1: Material {
                mean: self.mu1,
                cov: self.cov1,
                eta: column.eta,
            },
            material2: Material {
                mean: self.mu2,
                cov: self.cov2,
                eta: column.eta,
            },
            redundancy: self.redundancy,
            ..base
        }
        .with_impact(column.impact)
        .with_latent(column.p_latent)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixtures {
    pub tolerance: Tolerances,
    #[serde(rename = "table")]
    pub tables: Vec<Table>,
}

impl Fixtures {
    pub fn published() -> Result<Self> {
        Ok(toml::from_str(PUBLISHED_TABLES)?)
    }

    pub fn table(&self, id: u32) -> Result<&Table> {
        self.tables
            .iter()
            .find(|t| t.id == id)
            .ok_or(Error::UnknownTable(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures_parse() {
        let f = Fixtures::published().unwrap();
        assert_eq!(f.tables.len(), 4);
        for t in &f.tables {
            assert_eq!(t.columns.len(), 8, "table {}", t.id);
            for c in &t.columns {
                t.scenario(c).validate().unwrap();
            }
        }
        let t5 = f.table(5).unwrap();
        assert_eq!(t5.columns[1].beta21, -1.865);
        assert!(matches!(f.table(6), Err(Error::UnknownTable(6))));
        assert_eq!(f.table(3).unwrap().columns[0].tolerance.beta1, Some(0.005));
    }
}
