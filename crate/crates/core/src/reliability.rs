//! FOSM reliability indexes and closed-form system failure probability.
//!
//! All limit states are linear in Gaussian variables, so each index is the
//! exact mean/std ratio of its margin. Path probabilities are assembled from
//! the event trees of the two redundancy kinds and summed smallest-first.

use serde::Serialize;

use crate::gauss::{beta_to_pf, pf_to_beta, std_normal_cdf};
use crate::model::{Bar, Design, RedundancyKind, Scenario};

/// Margin mean over margin standard deviation. σ_P > 0 keeps `den` positive.
fn ratio(num: f64, den_sq: f64) -> f64 {
    num / den_sq.sqrt()
}

/// β of a primary failure.
///
/// Active-passive bars share the load, so the index uses the total area.
/// In a passive system the active bar carries the full load alone; asking for
/// bar 2 gives the standby's index if it were loaded alone.
pub fn beta_primary(design: &Design, scenario: &Scenario, bar: Bar) -> f64 {
    let (a1, a2) = scenario.areas(design);
    let area = match scenario.redundancy() {
        RedundancyKind::ActivePassive => a1 + a2,
        RedundancyKind::Passive => match bar {
            Bar::One => a1,
            Bar::Two => a2,
        },
    };
    primary_index(scenario, bar, area)
}

fn primary_index(scenario: &Scenario, bar: Bar, area: f64) -> f64 {
    let m = scenario.material(bar);
    let l = scenario.load();
    ratio(
        area * m.mean - l.mean,
        area * area * m.std_dev().powi(2) + l.std_dev().powi(2),
    )
}

/// β of the survivor after `failed_bar` is lost.
///
/// `eta` and `impact` default to the scenario values. In a passive system the
/// standby area is sized with the impact factor actually used, so an `f = 1`
/// override also resizes it.
pub fn beta_conditional(
    design: &Design,
    scenario: &Scenario,
    failed_bar: Bar,
    eta: Option<f64>,
    impact: Option<f64>,
) -> f64 {
    let eta = eta.unwrap_or(scenario.eta());
    let f = impact.unwrap_or(scenario.impact());
    let a_fail = scenario.area_with_impact(design.lambda(failed_bar), failed_bar, f);
    let surv = failed_bar.other();
    let a_surv = scenario.area_with_impact(design.lambda(surv), surv, f);
    conditional_index(scenario, failed_bar, a_fail, a_surv, eta, f)
}

fn conditional_index(
    scenario: &Scenario,
    failed_bar: Bar,
    a_fail: f64,
    a_surv: f64,
    eta: f64,
    f: f64,
) -> f64 {
    let mf = scenario.material(failed_bar);
    let ms = scenario.material(failed_bar.other());
    let l = scenario.load();
    let c = scenario.covariance().coefficient();
    let (sf, ss) = (mf.std_dev(), ms.std_dev());
    ratio(
        a_surv * ms.mean + eta * a_fail * mf.mean - f * l.mean,
        (a_surv * ss).powi(2)
            + (eta * a_fail * sf).powi(2)
            + c * eta * a_fail * a_surv * sf * ss * scenario.rho12()
            + (f * l.std_dev()).powi(2),
    )
}

/// β of the joint failure of both bars, with the load amplified by the impact
/// factor when `include_impact` is set.
pub fn beta_joint(design: &Design, scenario: &Scenario, include_impact: bool) -> f64 {
    let (a1, a2) = scenario.areas(design);
    let f = if include_impact {
        scenario.impact()
    } else {
        1.0
    };
    joint_index(scenario, a1, a2, f)
}

fn joint_index(scenario: &Scenario, a1: f64, a2: f64, f: f64) -> f64 {
    let m1 = scenario.material(Bar::One);
    let m2 = scenario.material(Bar::Two);
    let l = scenario.load();
    let c = scenario.covariance().coefficient();
    let (s1, s2) = (m1.std_dev(), m2.std_dev());
    ratio(
        a1 * m1.mean + a2 * m2.mean - f * l.mean,
        (a1 * s1).powi(2)
            + (a2 * s2).powi(2)
            + c * a1 * a2 * s1 * s2 * scenario.rho12()
            + (f * l.std_dev()).powi(2),
    )
}

fn joint_includes_impact(scenario: &Scenario) -> bool {
    scenario.is_passive()
}

/// P[only `bar` fails] = max(0, Φ(−β_bar) − Φ(−β_joint)).
pub fn p_only_first(design: &Design, scenario: &Scenario, bar: Bar) -> f64 {
    let b = beta_primary(design, scenario, bar);
    let bj = beta_joint(design, scenario, joint_includes_impact(scenario));
    clamp_only(b, bj)
}

fn clamp_only(beta: f64, beta_joint: f64) -> f64 {
    (beta_to_pf(beta) - beta_to_pf(beta_joint)).max(0.0)
}

/// P[F1 ∪ F2] = Φ(−β1) + Φ(−β2) − Φ(−β_joint), clamped to [0, 1].
pub fn p_union(design: &Design, scenario: &Scenario) -> f64 {
    let b1 = beta_primary(design, scenario, Bar::One);
    let b2 = beta_primary(design, scenario, Bar::Two);
    let bj = beta_joint(design, scenario, joint_includes_impact(scenario));
    clamp_union(b1, b2, bj)
}

fn clamp_union(b1: f64, b2: f64, bj: f64) -> f64 {
    (beta_to_pf(b1) + beta_to_pf(b2) - beta_to_pf(bj)).clamp(0.0, 1.0)
}

/// Every index the event trees need for one design.
///
/// Suffixes name the variant: `_eta0` forces η = 0 (the other bar's connection
/// is gone), `_f1` uses f = 1 (second, static load application).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Indexes {
    pub a1: f64,
    pub a2: f64,
    pub beta1: f64,
    /// Not an event of the passive tree.
    pub beta2: Option<f64>,
    pub beta_joint: f64,
    pub beta_21: f64,
    pub beta_21_eta0: f64,
    pub beta_21_eta0_f1: f64,
    pub beta_21_f1: f64,
    pub beta_12: Option<f64>,
    pub beta_12_eta0: Option<f64>,
    pub beta_12_eta0_f1: Option<f64>,
}

impl Indexes {
    pub fn compute(design: &Design, s: &Scenario) -> Self {
        let (a1, a2) = s.areas(design);
        let eta = s.eta();
        let f = s.impact();
        match s.redundancy() {
            RedundancyKind::ActivePassive => {
                let cond = |failed: Bar, eta: f64, f: f64| {
                    let (af, asv) = match failed {
                        Bar::One => (a1, a2),
                        Bar::Two => (a2, a1),
                    };
                    conditional_index(s, failed, af, asv, eta, f)
                };
                Indexes {
                    a1,
                    a2,
                    beta1: primary_index(s, Bar::One, a1 + a2),
                    beta2: Some(primary_index(s, Bar::Two, a1 + a2)),
                    beta_joint: joint_index(s, a1, a2, 1.0),
                    beta_21: cond(Bar::One, eta, f),
                    beta_21_eta0: cond(Bar::One, 0.0, f),
                    beta_21_eta0_f1: cond(Bar::One, 0.0, 1.0),
                    beta_21_f1: cond(Bar::One, eta, 1.0),
                    beta_12: Some(cond(Bar::Two, eta, f)),
                    beta_12_eta0: Some(cond(Bar::Two, 0.0, f)),
                    beta_12_eta0_f1: Some(cond(Bar::Two, 0.0, 1.0)),
                }
            }
            RedundancyKind::Passive => {
                let a2_static = s.area_with_impact(design.lambda2, Bar::Two, 1.0);
                Indexes {
                    a1,
                    a2,
                    beta1: primary_index(s, Bar::One, a1),
                    beta2: None,
                    beta_joint: joint_index(s, a1, a2, f),
                    beta_21: conditional_index(s, Bar::One, a1, a2, eta, f),
                    beta_21_eta0: conditional_index(s, Bar::One, a1, a2, 0.0, f),
                    beta_21_eta0_f1: conditional_index(s, Bar::One, a1, a2_static, 0.0, 1.0),
                    beta_21_f1: conditional_index(s, Bar::One, a1, a2_static, eta, 1.0),
                    beta_12: None,
                    beta_12_eta0: None,
                    beta_12_eta0_f1: None,
                }
            }
        }
    }
}

/// Weights of the four connection outcomes on first loading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LatentWeights {
    /// Both connections intact.
    pub intact: f64,
    /// Only connection 1 lost.
    pub only1: f64,
    /// Only connection 2 lost.
    pub only2: f64,
    pub both: f64,
}

impl LatentWeights {
    pub fn of(s: &Scenario) -> Self {
        let p1 = s.latent_p(Bar::One);
        let p2 = s.latent_p(Bar::Two);
        Self {
            intact: (1.0 - p1) * (1.0 - p2),
            only1: p1 * (1.0 - p2),
            only2: (1.0 - p1) * p2,
            both: p1 * p2,
        }
    }
}

/// Shorthand used by the tree assemblies: Φ(−β) and Φ(β).
pub(crate) fn pf(beta: f64) -> f64 {
    beta_to_pf(beta)
}

pub(crate) fn ps(beta: f64) -> f64 {
    std_normal_cdf(beta)
}

/// One weighted path of an event tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathTerm {
    pub label: &'static str,
    pub probability: f64,
}

/// Sum of nonnegative terms, smallest first.
pub(crate) fn sum_ascending(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.into_iter().sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReliabilityBreakdown {
    pub indexes: Indexes,
    pub p_f1_only: f64,
    /// Not an event of the passive tree.
    pub p_f2_only: Option<f64>,
    pub p_union: f64,
    pub paths: Vec<PathTerm>,
    pub p_sys: f64,
    pub beta_sys: f64,
}

impl ReliabilityBreakdown {
    pub fn beta1(&self) -> f64 {
        self.indexes.beta1
    }

    pub fn beta_21(&self) -> f64 {
        self.indexes.beta_21
    }

    pub fn beta_joint(&self) -> f64 {
        self.indexes.beta_joint
    }
}

/// Closed-form system failure probability.
pub fn system_failure_probability(design: &Design, scenario: &Scenario) -> ReliabilityBreakdown {
    let ix = Indexes::compute(design, scenario);
    let w = LatentWeights::of(scenario);
    let (paths, f1o, f2o, union) = match scenario.redundancy() {
        RedundancyKind::ActivePassive => active_passive_paths(&ix, &w),
        RedundancyKind::Passive => passive_paths(&ix, &w, scenario.standby_engages()),
    };
    let p_sys = sum_ascending(paths.iter().map(|t| t.probability).collect()).clamp(0.0, 1.0);
    let beta_sys = pf_to_beta(p_sys).expect("p_sys is clamped to [0, 1]");
    ReliabilityBreakdown {
        indexes: ix,
        p_f1_only: f1o,
        p_f2_only: f2o,
        p_union: union,
        paths,
        p_sys,
        beta_sys,
    }
}

type Paths = (Vec<PathTerm>, f64, Option<f64>, f64);

fn active_passive_paths(ix: &Indexes, w: &LatentWeights) -> Paths {
    let b2 = ix.beta2.expect("active-passive has β2");
    let b12 = ix.beta_12.expect("active-passive has β1|2");
    let b12_0 = ix.beta_12_eta0.expect("active-passive has β1|2(η=0)");
    let b12_01 = ix
        .beta_12_eta0_f1
        .expect("active-passive has β1|2(η=0,f=1)");
    let f1o = clamp_only(ix.beta1, ix.beta_joint);
    let f2o = clamp_only(b2, ix.beta_joint);
    let union = clamp_union(ix.beta1, b2, ix.beta_joint);
    let t = |label, probability| PathTerm { label, probability };
    let paths = vec![
        t("F1 then F2|1", w.intact * f1o * pf(ix.beta_21)),
        t("F2 then F1|2", w.intact * f2o * pf(b12)),
        t("F1 and F2 jointly", w.intact * pf(ix.beta_joint)),
        t(
            "c1 lost, bar 2 survives impact, fails on reload",
            w.only1 * ps(ix.beta_21_eta0) * pf(ix.beta_21_eta0_f1),
        ),
        t(
            "c1 lost, bar 2 fails on impact",
            w.only1 * pf(ix.beta_21_eta0),
        ),
        t(
            "c2 lost, bar 1 survives impact, fails on reload",
            w.only2 * ps(b12_0) * pf(b12_01),
        ),
        t("c2 lost, bar 1 fails on impact", w.only2 * pf(b12_0)),
        t("both connections lost", w.both),
    ];
    (paths, f1o, Some(f2o), union)
}

fn passive_paths(ix: &Indexes, w: &LatentWeights, engages: bool) -> Paths {
    let f1o = clamp_only(ix.beta1, ix.beta_joint);
    let joint = if engages { pf(ix.beta_joint) } else { 0.0 };
    // The standby's own primary failure is not a tree event; the union
    // reduces to the active bar's failure.
    let union = pf(ix.beta1);
    let t = |label, probability| PathTerm { label, probability };
    let paths = vec![
        t(
            "F1, standby fails on impact and on reload",
            w.intact * f1o * pf(ix.beta_21) * pf(ix.beta_21_f1),
        ),
        t(
            "c1 lost, standby survives impact, fails on reload",
            w.only1 * ps(ix.beta_21_eta0) * pf(ix.beta_21_eta0_f1),
        ),
        t(
            "bar 1 survives first load, joint failure",
            w.intact * ps(ix.beta1) * joint,
        ),
        t(
            "F1, standby fails on impact",
            w.intact * f1o * pf(ix.beta_21),
        ),
        t("c2 lost, F1", w.only2 * f1o),
        t("joint failure", w.intact * joint),
        t(
            "c1 lost, standby fails on impact",
            w.only1 * pf(ix.beta_21_eta0),
        ),
        t("both connections lost", w.both),
    ];
    (paths, f1o, None, union)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RedundancyKind, ScenarioConfig};

    fn scenario(eta: f64, f: f64, p: f64) -> Scenario {
        ScenarioConfig::default()
            .with_eta(eta)
            .with_impact(f)
            .with_latent(p)
            .validate()
            .unwrap()
    }

    fn passive(eta: f64, f: f64, p: f64) -> Scenario {
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

    fn d(l1: f64, l2: f64) -> Design {
        Design::new(l1, l2).unwrap()
    }

    fn close(got: f64, want: f64, tol: f64) {
        assert!((got - want).abs() <= tol, "got {got}, want {want} ± {tol}");
    }

    #[test]
    fn primary_index_examples() {
        let s = scenario(0.0, 1.0, 1e-3);
        close(beta_primary(&d(1.110, 1.110), &s, Bar::One), 3.268, 2e-3);

        let mut c = ScenarioConfig::default();
        c.material1.mean = 1.0;
        c.material2.mean = 9.0;
        let s = c.validate().unwrap();
        // a2 = 2.219·10/9 = 2.4656
        close(beta_primary(&d(0.0, 2.219), &s, Bar::One), -2.503, 1e-3);

        let p = passive(0.0, 1.3, 1e-3);
        let b = beta_primary(&d(2.2685, 0.435), &p, Bar::One);
        close(b, 3.373, 2e-3);
        close(beta_primary(&d(2.2685, 3.0), &p, Bar::One), b, 0.0);
    }

    #[test]
    fn conditional_index_examples() {
        let s = scenario(0.0, 1.0, 1e-3);
        close(
            beta_conditional(&d(1.110, 1.110), &s, Bar::One, None, None),
            0.343,
            2e-3,
        );
        let s = scenario(1.0, 1.0, 1e-3);
        close(
            beta_conditional(&d(1.104, 1.104), &s, Bar::One, None, None),
            3.570,
            2e-3,
        );
        let p = passive(0.0, 1.3, 1e-3);
        close(
            beta_conditional(&d(2.269, 0.435), &p, Bar::One, None, None),
            -1.865,
            3e-3,
        );
    }

    #[test]
    fn passive_static_variant_resizes_standby() {
        let p = passive(0.0, 1.3, 1e-2);
        let design = d(1.938, 1.481);
        let ix = Indexes::compute(&design, &p);
        close(ix.beta_21_eta0_f1, ix.beta_21_eta0, 1e-12);
        close(
            beta_conditional(&design, &p, Bar::One, Some(0.0), Some(1.0)),
            ix.beta_21_eta0_f1,
            1e-12,
        );
    }

    #[test]
    fn joint_index_examples() {
        let s = scenario(0.0, 1.0, 1e-3);
        close(beta_joint(&d(1.110, 1.110), &s, false), 3.602, 2e-3);
        let p = passive(0.0, 1.3, 1e-3);
        close(beta_joint(&d(2.269, 0.435), &p, true), 3.373, 3e-3);

        let s = ScenarioConfig {
            rho12: 0.7,
            ..ScenarioConfig::default()
        }
        .validate()
        .unwrap();
        let design = d(1.7, 0.0);
        close(
            beta_joint(&design, &s, false),
            beta_primary(&design, &s, Bar::One),
            1e-12,
        );
    }

    #[test]
    fn only_first_and_union() {
        let s = scenario(0.0, 1.0, 1e-3);
        let design = d(1.110, 1.110);
        let want = std_normal_cdf(-3.268) - std_normal_cdf(-3.602);
        close(p_only_first(&design, &s, Bar::One), want, 1e-5);
        close(
            p_only_first(&design, &s, Bar::One),
            p_only_first(&design, &s, Bar::Two),
            1e-18,
        );
        close(
            p_union(&design, &s),
            2.0 * std_normal_cdf(-3.268) - std_normal_cdf(-3.602),
            1e-5,
        );

        let single = d(1.5, 0.0);
        close(
            p_union(&single, &s),
            beta_to_pf(beta_primary(&single, &s, Bar::One)),
            1e-16,
        );
        assert!(p_union(&d(50.0, 50.0), &s) < 1e-20);
    }

    #[test]
    fn clamp_when_joint_is_weaker() {
        assert_eq!(clamp_only(3.0, 2.0), 0.0);
    }

    #[test]
    fn system_index_examples() {
        let r = system_failure_probability(&d(1.110, 1.110), &scenario(0.0, 1.0, 1e-3));
        close(r.beta_sys, 2.942, 5e-3);
        close(pf_to_beta(r.p_sys).unwrap(), r.beta_sys, 0.0);

        let r = system_failure_probability(&d(1.110, 1.110), &scenario(0.0, 1.0, 1.0));
        assert_eq!(r.p_sys, 1.0);

        let r = system_failure_probability(&d(2.286, 0.0), &passive(0.0, 1.0, 1e-3));
        close(r.beta_sys, 2.939, 1e-2);
    }

    #[test]
    fn disengaged_standby_drops_joint_paths() {
        let design = d(2.269, 0.435);
        let on = system_failure_probability(&design, &passive(0.0, 1.3, 1e-3));
        let cfg = ScenarioConfig {
            redundancy: RedundancyKind::Passive,
            standby_engages: false,
            ..ScenarioConfig::default()
        }
        .with_impact(1.3);
        let off = system_failure_probability(&design, &cfg.validate().unwrap());
        assert!(off.p_sys < on.p_sys);
        let joint: f64 = on
            .paths
            .iter()
            .filter(|t| t.label.contains("joint"))
            .map(|t| t.probability)
            .sum();
        close(on.p_sys - off.p_sys, joint, 1e-15);
    }

    #[test]
    fn paths_are_nonnegative() {
        let r = system_failure_probability(&d(0.3, 2.0), &scenario(1.0, 1.3, 1e-2));
        assert_eq!(r.paths.len(), 8);
        assert!(r.paths.iter().all(|t| t.probability >= 0.0));
    }
}
