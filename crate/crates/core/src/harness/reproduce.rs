use serde::Serialize;

use super::fixtures::{Column, Fixtures, Table, Tolerances};
use crate::error::Result;
use crate::model::{Bar, Design};
use crate::optimize::{ro_optimize, OptimizationResult};

/// One compared quantity of one column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub quantity: &'static str,
    pub computed: f64,
    pub published: f64,
    pub tolerance: f64,
}

impl Cell {
    pub fn deviation(&self) -> f64 {
        self.computed - self.published
    }

    pub fn pass(&self) -> bool {
        self.deviation().abs() <= self.tolerance + 1e-12
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnReport {
    pub table: u32,
    pub column: usize,
    pub eta: f64,
    pub impact: f64,
    pub p_latent: f64,
    pub optimum: OptimizationResult,
    pub cells: Vec<Cell>,
}

impl ColumnReport {
    pub fn pass(&self) -> bool {
        self.cells.iter().all(Cell::pass)
    }

    pub fn cell(&self, quantity: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.quantity == quantity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub table: u32,
    pub title: String,
    pub columns: Vec<ColumnReport>,
}

impl TableReport {
    pub fn pass(&self) -> bool {
        self.columns.iter().all(ColumnReport::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&ColumnReport, &Cell)> {
        self.columns
            .iter()
            .flat_map(|c| c.cells.iter().filter(|x| !x.pass()).map(move |x| (c, x)))
    }
}

fn compare(table: &Table, index: usize, col: &Column, tol: &Tolerances) -> Result<ColumnReport> {
    let scenario = table.scenario(col).validate()?;
    let opt = ro_optimize(&scenario);
    let b = &opt.breakdown;
    let c = &opt.costs;
    let published = Design::new(col.lambda1, col.lambda2)?;
    let beta1_tol = col.tolerance.beta1.unwrap_or(tol.beta);
    let cell = |quantity, computed, published, tolerance| Cell {
        quantity,
        computed,
        published,
        tolerance,
    };
    let cells = vec![
        cell("lambda1", opt.best.lambda1, col.lambda1, tol.lambda),
        cell("lambda2", opt.best.lambda2, col.lambda2, tol.lambda),
        // Sizing rule applied to the published factors.
        cell(
            "a1",
            scenario.member_area(published.lambda1, Bar::One)?,
            col.a1,
            tol.area,
        ),
        cell(
            "a2",
            scenario.member_area(published.lambda2, Bar::Two)?,
            col.a2,
            tol.area,
        ),
        cell("beta1", b.beta1(), col.beta1, beta1_tol),
        cell("beta21", b.beta_21(), col.beta21, tol.beta),
        cell("beta_joint", b.beta_joint(), col.beta_joint, tol.beta),
        cell("beta_sys", b.beta_sys, col.beta_sys, tol.beta),
        cell("material", c.material, col.material, tol.cost),
        cell("sf", c.sf, col.sf, tol.sf),
        cell("pc", c.pc, col.pc, tol.cost),
        cell("dc", c.dc, col.dc, tol.cost),
        cell("total", c.total, col.total, tol.total),
    ];
    Ok(ColumnReport {
        table: table.id,
        column: index + 1,
        eta: col.eta,
        impact: col.impact,
        p_latent: col.p_latent,
        optimum: opt,
        cells,
    })
}

/// Re-runs the risk optimization for every column of a published table.
pub fn run_reproduce(table_id: u32) -> Result<TableReport> {
    let fixtures = Fixtures::published()?;
    let table = fixtures.table(table_id)?;
    let columns = table
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| compare(table, i, c, &fixtures.tolerance))
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport {
        table: table.id,
        title: table.title.clone(),
        columns,
    })
}

/// Wide CSV: per quantity the computed value, the published value and the
/// deviation, then an overall pass flag.
pub fn reproduce_csv(report: &TableReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let quantities: Vec<&str> = report
        .columns
        .first()
        .map(|c| c.cells.iter().map(|x| x.quantity).collect())
        .unwrap_or_default();
    let mut header = vec![
        "table".to_string(),
        "column".into(),
        "eta".into(),
        "impact".into(),
        "p_latent".into(),
    ];
    for q in &quantities {
        header.push(q.to_string());
        header.push(format!("{q}_published"));
        header.push(format!("{q}_dev"));
    }
    header.push("pass".into());
    w.write_record(&header).map_err(super::csv_err)?;
    for col in &report.columns {
        let mut row = vec![
            col.table.to_string(),
            col.column.to_string(),
            col.eta.to_string(),
            col.impact.to_string(),
            format!("{:e}", col.p_latent),
        ];
        for c in &col.cells {
            row.push(super::num(c.computed));
            row.push(super::num(c.published));
            row.push(super::num(c.deviation()));
        }
        row.push(col.pass().to_string());
        w.write_record(&row).map_err(super::csv_err)?;
    }
    super::finish(w)
}
