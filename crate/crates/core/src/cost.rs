//! Normalized material cost and expected life-cycle cost.
//!
//! Costs are relative to the reference structure built with λ1 = λ2 = 1 (and
//! f = 1 for a passive standby). Failure consequences are multiples of the
//! material cost of the members that must be replaced.

use serde::Serialize;

use crate::model::{Design, RedundancyKind, Scenario};
use crate::reliability::{pf, ps, sum_ascending, Indexes, LatentWeights};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub material: f64,
    pub sf: f64,
    pub pc: f64,
    pub dc: f64,
    pub total: f64,
}

impl CostBreakdown {
    fn new(material: f64, sf: f64, pc: f64, dc: f64) -> Self {
        Self {
            material,
            sf,
            pc,
            dc,
            total: material + sf + pc + dc,
        }
    }
}

/// (a1 μ1 + a2 μ2) normalized by the reference structure.
pub fn material_cost(design: &Design, scenario: &Scenario) -> f64 {
    match scenario.redundancy() {
        RedundancyKind::ActivePassive => (design.lambda1 + design.lambda2) / 2.0,
        RedundancyKind::Passive => (design.lambda1 + scenario.impact() * design.lambda2) / 2.0,
    }
}

/// Material cost plus expected service-failure, progressive-collapse and
/// direct-collapse costs.
pub fn risk_objective(design: &Design, scenario: &Scenario) -> CostBreakdown {
    let ix = Indexes::compute(design, scenario);
    risk_from_indexes(design, scenario, &ix)
}

pub(crate) fn risk_from_indexes(design: &Design, s: &Scenario, ix: &Indexes) -> CostBreakdown {
    let w = LatentWeights::of(s);
    let k = s.costs();
    let material = material_cost(design, s);
    let (sf, pc, dc) = match s.redundancy() {
        RedundancyKind::ActivePassive => active_passive(design, ix, &w),
        RedundancyKind::Passive => passive(design, ix, &w, s.standby_engages()),
    };
    CostBreakdown::new(material, k.service * sf, k.progressive * pc, k.direct * dc)
}

/// Unscaled (SF, PC, DC) sums; the caller applies the k multipliers.
fn active_passive(design: &Design, ix: &Indexes, w: &LatentWeights) -> (f64, f64, f64) {
    let b2 = ix.beta2.expect("active-passive has β2");
    let b12 = ix.beta_12.expect("active-passive has β1|2");
    let b12_0 = ix.beta_12_eta0.expect("active-passive has β1|2(η=0)");
    let b12_01 = ix
        .beta_12_eta0_f1
        .expect("active-passive has β1|2(η=0,f=1)");
    let pj = pf(ix.beta_joint);
    let f1o = (pf(ix.beta1) - pj).max(0.0);
    let f2o = (pf(b2) - pj).max(0.0);
    let union = (pf(ix.beta1) + pf(b2) - pj).clamp(0.0, 1.0);
    // A service failure can start on either load application.
    let two_loads = 1.0 + (1.0 - union);

    let sf = sum_ascending(vec![
        design.lambda1 * w.intact * f1o * two_loads * ps(ix.beta_21),
        design.lambda2 * w.intact * f2o * two_loads * ps(b12),
    ]);
    let pc = sum_ascending(vec![
        w.intact * f1o * pf(ix.beta_21),
        w.intact * f2o * pf(b12),
        w.only1 * ps(ix.beta_21_eta0) * pf(ix.beta_21_eta0_f1),
        w.only2 * ps(b12_0) * pf(b12_01),
    ]);
    let dc = sum_ascending(vec![
        w.intact * pj * two_loads,
        w.only1 * pf(ix.beta_21_eta0),
        w.only2 * pf(b12_0),
        w.both,
    ]);
    (sf, pc, dc)
}

fn passive(design: &Design, ix: &Indexes, w: &LatentWeights, engages: bool) -> (f64, f64, f64) {
    let pj = pf(ix.beta_joint);
    let f1o = (pf(ix.beta1) - pj).max(0.0);
    let joint = if engages { pj } else { 0.0 };
    let no_c1 = w.intact + w.only2;

    let sf = design.lambda1
        * sum_ascending(vec![
            no_c1 * ps(ix.beta1) * f1o,
            w.intact * f1o * ps(ix.beta_21) * ps(ix.beta_21_f1),
        ]);
    let pc = sum_ascending(vec![
        w.intact * f1o * ps(ix.beta_21) * pf(ix.beta_21_f1),
        w.only1 * ps(ix.beta_21_eta0) * pf(ix.beta_21_eta0_f1),
    ]);
    let dc = sum_ascending(vec![
        w.intact * ps(ix.beta1) * joint,
        w.intact * f1o * pf(ix.beta_21),
        w.only2 * f1o,
        w.intact * joint,
        w.only1 * pf(ix.beta_21_eta0),
        w.both,
    ]);
    (sf, pc, dc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ScenarioConfig;

    fn close(got: f64, want: f64, tol: f64) {
        assert!((got - want).abs() <= tol, "got {got}, want {want} ± {tol}");
    }

    fn scenario(eta: f64, f: f64, p: f64) -> Scenario {
        ScenarioConfig::default()
            .with_eta(eta)
            .with_impact(f)
            .with_latent(p)
            .validate()
            .unwrap()
    }

    fn passive_scenario(eta: f64, f: f64, p: f64) -> Scenario {
        ScenarioConfig {
            redundancy: RedundancyKind::Passive,
            ..ScenarioConfig::default()
        }
        .with_eta(eta)
        .with_impact(f)
        .with_latent(p)
        .validate()
        .unwrap()
    }

    #[test]
    fn material_examples() {
        let s = scenario(0.0, 1.0, 1e-3);
        close(
            material_cost(&Design::new(1.110, 1.110).unwrap(), &s),
            1.110,
            1e-12,
        );
        close(
            material_cost(&Design::new(1.0, 1.0).unwrap(), &s),
            1.0,
            1e-15,
        );
        let p = passive_scenario(0.0, 1.3, 1e-3);
        close(
            material_cost(&Design::new(2.269, 0.435).unwrap(), &p),
            1.417,
            1e-3,
        );
    }

    #[test]
    fn optimum_of_first_column() {
        let c = risk_objective(
            &Design::new(1.110, 1.110).unwrap(),
            &scenario(0.0, 1.0, 1e-3),
        );
        close(c.material, 1.110, 1e-12);
        close(c.pc, 0.015, 3e-3);
        close(c.dc, 0.105, 3e-3);
        close(c.sf, 0.003, 3e-3);
        close(c.total, 1.232, 1e-2);
        close(c.total, c.material + c.sf + c.pc + c.dc, 1e-12);
    }

    #[test]
    fn passive_single_bar_column() {
        let c = risk_objective(
            &Design::new(2.286, 0.0).unwrap(),
            &passive_scenario(0.0, 1.0, 1e-3),
        );
        close(c.material, 1.143, 1e-12);
        // The tabulated DC/total carry an extra ≈ k_DC·p_L term.
        close(c.dc, 0.165, 3e-3);
    }

    #[test]
    fn failure_terms_vanish_without_latent_risk() {
        let s = scenario(0.0, 1.0, 0.0);
        let c = risk_objective(&Design::new(40.0, 40.0).unwrap(), &s);
        close(c.total, c.material, 1e-12);
    }

    #[test]
    fn direct_collapse_floor() {
        let s = scenario(1.0, 1.3, 1e-2);
        for (l1, l2) in [(0.0, 0.0), (0.5, 2.0), (3.0, 3.0)] {
            let c = risk_objective(&Design::projected(l1, l2), &s);
            assert!(c.dc >= 100.0 * 1e-4 - 1e-15);
        }
    }
}
