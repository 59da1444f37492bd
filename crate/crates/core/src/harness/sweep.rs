//! Parametric sweeps over scenario factors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::model::{Design, ScenarioConfig};
use crate::optimize::{rbdo_optimize, ro_optimize, FrontierOptions, RbdoOutcome};

/// Value lists per factor; an empty list keeps the base value.
///
/// `mean_ratio` is μ2/μ1 and `cov_ratio` is δ1/δ2. Both keep the base sum
/// fixed, so a ratio of 9 on μ = (5, 5) gives (1, 9) and a ratio of 3 on
/// δ = (0.1, 0.1) gives (0.15, 0.05).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Axes {
    pub p_latent: Vec<f64>,
    pub impact: Vec<f64>,
    pub rho12: Vec<f64>,
    pub eta: Vec<f64>,
    pub mean_ratio: Vec<f64>,
    pub cov_ratio: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepMode {
    Ro,
    Rbdo { beta_targets: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    #[serde(default)]
    pub axes: Axes,
    pub mode: SweepMode,
}

/// Factor values of one sweep combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub p_latent: f64,
    pub impact: f64,
    pub rho12: f64,
    pub eta: f64,
    pub mean_ratio: f64,
    pub cov_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub point: Point,
    pub beta_target: Option<f64>,
    pub status: &'static str,
    pub design: Option<Design>,
    pub beta_sys: f64,
    pub p_sys: f64,
    pub material: f64,
    pub sf: f64,
    pub pc: f64,
    pub dc: f64,
    pub total: f64,
}

fn or_base(v: &[f64], base: f64) -> Vec<f64> {
    if v.is_empty() {
        vec![base]
    } else {
        v.to_vec()
    }
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn points(&self) -> Vec<Point> {
        let b = &self.base;
        let a = &self.axes;
        let mut out = Vec::new();
        for &p in &or_base(&a.p_latent, b.latent.p1.max(b.latent.p2)) {
            for &f in &or_base(&a.impact, b.load.impact) {
                for &r in &or_base(&a.rho12, b.rho12) {
                    for &e in &or_base(&a.eta, b.material1.eta) {
                        for &m in &or_base(&a.mean_ratio, b.material2.mean / b.material1.mean) {
                            for &c in &or_base(&a.cov_ratio, b.material1.cov / b.material2.cov) {
                                out.push(Point {
                                    p_latent: p,
                                    impact: f,
                                    rho12: r,
                                    eta: e,
                                    mean_ratio: m,
                                    cov_ratio: c,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Scenario for one combination; axes left empty keep the base exactly.
    pub fn scenario_at(&self, pt: &Point) -> ScenarioConfig {
        let mut s = self.base.clone();
        let a = &self.axes;
        if !a.p_latent.is_empty() {
            s = s.with_latent(pt.p_latent);
        }
        if !a.impact.is_empty() {
            s = s.with_impact(pt.impact);
        }
        if !a.rho12.is_empty() {
            s.rho12 = pt.rho12;
        }
        if !a.eta.is_empty() {
            s = s.with_eta(pt.eta);
        }
        if !a.mean_ratio.is_empty() {
            let sum = self.base.material1.mean + self.base.material2.mean;
            s.material1.mean = sum / (1.0 + pt.mean_ratio);
            s.material2.mean = sum * pt.mean_ratio / (1.0 + pt.mean_ratio);
        }
        if !a.cov_ratio.is_empty() {
            let sum = self.base.material1.cov + self.base.material2.cov;
            s.material1.cov = sum * pt.cov_ratio / (1.0 + pt.cov_ratio);
            s.material2.cov = sum / (1.0 + pt.cov_ratio);
        }
        s
    }

    /// Every combination's violations, checked before any optimization.
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let a = &self.axes;
        for (name, values) in [
            ("axes.mean_ratio", &a.mean_ratio),
            ("axes.cov_ratio", &a.cov_ratio),
        ] {
            for &x in values {
                if !(x > 0.0 && x.is_finite()) {
                    v.push(Violation {
                        field: name.into(),
                        bound: "ratio > 0".into(),
                        value: x,
                    });
                }
            }
        }
        if let SweepMode::Rbdo { beta_targets } = &self.mode {
            for &b in beta_targets {
                if b.is_nan() {
                    v.push(Violation {
                        field: "mode.rbdo.beta_targets".into(),
                        bound: "β_T not NaN".into(),
                        value: b,
                    });
                }
            }
        }
        for pt in self.points() {
            for x in self.scenario_at(&pt).violations() {
                if !v.contains(&x) {
                    v.push(x);
                }
            }
        }
        v
    }
}

fn row(
    point: Point,
    beta_target: Option<f64>,
    status: &'static str,
    r: Option<&crate::optimize::OptimizationResult>,
) -> SweepRow {
    match r {
        Some(r) => SweepRow {
            point,
            beta_target,
            status,
            design: Some(r.best),
            beta_sys: r.breakdown.beta_sys,
            p_sys: r.breakdown.p_sys,
            material: r.costs.material,
            sf: r.costs.sf,
            pc: r.costs.pc,
            dc: r.costs.dc,
            total: r.costs.total,
        },
        None => SweepRow {
            point,
            beta_target,
            status,
            design: None,
            beta_sys: f64::NAN,
            p_sys: f64::NAN,
            material: f64::NAN,
            sf: f64::NAN,
            pc: f64::NAN,
            dc: f64::NAN,
            total: f64::NAN,
        },
    }
}

/// Optimizes every combination; rows are in lexicographic axis order
/// (p_latent, impact, rho12, eta, mean_ratio, cov_ratio, then β_T).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let v = spec.violations();
    if !v.is_empty() {
        return Err(Error::InvalidScenario(v));
    }
    let mut jobs = Vec::new();
    for pt in spec.points() {
        match &spec.mode {
            SweepMode::Ro => jobs.push((pt, None)),
            SweepMode::Rbdo { beta_targets } => {
                jobs.extend(beta_targets.iter().map(|&b| (pt, Some(b))))
            }
        }
    }
    jobs.par_iter()
        .map(|&(pt, target)| {
            let scenario = spec.scenario_at(&pt).validate()?;
            Ok(match target {
                None => row(pt, None, "optimal", Some(&ro_optimize(&scenario))),
                Some(b) => match rbdo_optimize(&scenario, b, &FrontierOptions::default())? {
                    RbdoOutcome::Optimal(r) => row(pt, target, "optimal", Some(&r)),
                    RbdoOutcome::Degenerate(r) => row(pt, target, "degenerate", Some(&r)),
                    RbdoOutcome::Infeasible { max_beta_sys, .. } => {
                        let mut r = row(pt, target, "infeasible", None);
                        r.beta_sys = max_beta_sys;
                        r
                    }
                },
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "p_latent",
        "impact",
        "rho12",
        "eta",
        "mean_ratio",
        "cov_ratio",
        "beta_target",
        "status",
        "lambda1",
        "lambda2",
        "beta_sys",
        "p_sys",
        "material",
        "sf",
        "pc",
        "dc",
        "total",
    ])
    .map_err(super::csv_err)?;
    for r in rows {
        let p = &r.point;
        let opt = |x: Option<f64>| x.map(super::num).unwrap_or_default();
        w.write_record([
            format!("{:e}", p.p_latent),
            super::num(p.impact),
            super::num(p.rho12),
            super::num(p.eta),
            super::num(p.mean_ratio),
            super::num(p.cov_ratio),
            opt(r.beta_target),
            r.status.to_string(),
            opt(r.design.map(|d| d.lambda1)),
            opt(r.design.map(|d| d.lambda2)),
            super::num(r.beta_sys),
            super::num(r.p_sys),
            super::num(r.material),
            super::num(r.sf),
            super::num(r.pc),
            super::num(r.dc),
            super::num(r.total),
        ])
        .map_err(super::csv_err)?;
    }
    super::finish(w)
}
