//! Scenario and design types, member sizing and load sharing.
//!
//! A [`Scenario`] can only be obtained through [`ScenarioConfig::validate`],
//! so every scenario handed to the reliability and cost code satisfies the
//! invariants listed in [`ScenarioConfig::violations`].

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::gauss;

/// Gaussian strength with fragile–ductile post-failure factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    /// Mean rupture or yield stress μ.
    pub mean: f64,
    /// Coefficient of variation δ = σ/μ.
    pub cov: f64,
    /// Residual strength fraction after failure (0 fragile, 1 ductile).
    pub eta: f64,
}

impl Material {
    pub fn std_dev(&self) -> f64 {
        self.cov * self.mean
    }
}

/// Two independent, identically distributed Gaussian load pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadModel {
    pub mean: f64,
    pub cov: f64,
    /// Dynamic amplification on the survivor right after a member is lost.
    pub impact: f64,
}

impl LoadModel {
    pub fn std_dev(&self) -> f64 {
        self.cov * self.mean
    }
}

/// Design-independent connection failure probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatentFailure {
    #[serde(rename = "pL1")]
    pub p1: f64,
    #[serde(rename = "pL2")]
    pub p2: f64,
}

impl LatentFailure {
    /// β_L = −Φ⁻¹[max(p_L1, p_L2)].
    pub fn beta_latent(&self) -> f64 {
        gauss::pf_to_beta(self.p1.max(self.p2)).unwrap_or(f64::NAN)
    }
}

/// Consequence multipliers, relative to the reference structure's material cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostMultipliers {
    #[serde(rename = "kSF")]
    pub service: f64,
    #[serde(rename = "kPC")]
    pub progressive: f64,
    #[serde(rename = "kDC")]
    pub direct: f64,
}

impl Default for CostMultipliers {
    fn default() -> Self {
        Self {
            service: 2.0,
            progressive: 20.0,
            direct: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedundancyKind {
    /// Both bars share the load from the start.
    ActivePassive,
    /// Bar 2 is a standby that only takes load once bar 1 or its connection fails.
    Passive,
}

/// How the strength cross term enters the variance of two-bar limit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceConvention {
    /// `η a1 a2 σ1 σ2 ρ12`, as the closed forms are usually printed.
    #[default]
    AsPrinted,
    /// `2 η a1 a2 σ1 σ2 ρ12`, the bilinear variance expansion.
    Standard,
}

impl CovarianceConvention {
    pub fn coefficient(self) -> f64 {
        match self {
            CovarianceConvention::AsPrinted => 1.0,
            CovarianceConvention::Standard => 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bar {
    One,
    Two,
}

impl Bar {
    pub fn other(self) -> Bar {
        match self {
            Bar::One => Bar::Two,
            Bar::Two => Bar::One,
        }
    }
}

fn default_true() -> bool {
    true
}

/// Raw scenario document, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub material1: Material,
    pub material2: Material,
    pub load: LoadModel,
    pub rho12: f64,
    pub latent: LatentFailure,
    pub redundancy: RedundancyKind,
    #[serde(default = "default_true")]
    pub standby_engages: bool,
    #[serde(default)]
    pub costs: CostMultipliers,
    #[serde(default)]
    pub covariance_convention: CovarianceConvention,
}

impl Default for ScenarioConfig {
    /// Two bars of the same material (μ = 5, δ = 0.1, fragile), μ_P = 10,
    /// δ_P = 0.3, no impact, p_L = 1e-3 on both connections.
    fn default() -> Self {
        let m = Material {
            mean: 5.0,
            cov: 0.1,
            eta: 0.0,
        };
        Self {
            material1: m,
            material2: m,
            load: LoadModel {
                mean: 10.0,
                cov: 0.3,
                impact: 1.0,
            },
            rho12: 0.0,
            latent: LatentFailure { p1: 1e-3, p2: 1e-3 },
            redundancy: RedundancyKind::ActivePassive,
            standby_engages: true,
            costs: CostMultipliers::default(),
            covariance_convention: CovarianceConvention::AsPrinted,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario config serializes")
    }

    /// Sets η on both materials.
    pub fn with_eta(mut self, eta: f64) -> Self {
        self.material1.eta = eta;
        self.material2.eta = eta;
        self
    }

    pub fn with_latent(mut self, p: f64) -> Self {
        self.latent = LatentFailure { p1: p, p2: p };
        self
    }

    pub fn with_impact(mut self, f: f64) -> Self {
        self.load.impact = f;
        self
    }

    /// Every violated invariant, in a fixed order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut check = |ok: bool, field: &str, bound: &str, value: f64| {
            if !ok {
                out.push(Violation {
                    field: field.to_string(),
                    bound: bound.to_string(),
                    value,
                });
            }
        };
        for (name, m) in [
            ("material1", &self.material1),
            ("material2", &self.material2),
        ] {
            check(
                m.mean > 0.0 && m.mean.is_finite(),
                &format!("{name}.mean"),
                "μ > 0",
                m.mean,
            );
            check(
                m.cov > 0.0 && m.cov.is_finite(),
                &format!("{name}.cov"),
                "δ > 0",
                m.cov,
            );
            check(
                (0.0..=1.0).contains(&m.eta),
                &format!("{name}.eta"),
                "0 ≤ η ≤ 1",
                m.eta,
            );
        }
        check(
            self.material1.eta == self.material2.eta,
            "material2.eta",
            "η equal to material1.eta (mixed assemblies unsupported)",
            self.material2.eta,
        );
        let l = &self.load;
        check(
            l.mean > 0.0 && l.mean.is_finite(),
            "load.mean",
            "μ_P > 0",
            l.mean,
        );
        check(
            l.cov > 0.0 && l.cov.is_finite(),
            "load.cov",
            "δ_P > 0",
            l.cov,
        );
        check(
            l.impact >= 1.0 && l.impact.is_finite(),
            "load.impact",
            "f_i ≥ 1",
            l.impact,
        );
        check(
            (0.0..1.0).contains(&self.rho12),
            "rho12",
            "ρ12 ∈ [0,1)",
            self.rho12,
        );
        check(
            (0.0..=1.0).contains(&self.latent.p1),
            "latent.pL1",
            "p_L1 ∈ [0,1]",
            self.latent.p1,
        );
        check(
            (0.0..=1.0).contains(&self.latent.p2),
            "latent.pL2",
            "p_L2 ∈ [0,1]",
            self.latent.p2,
        );
        let k = &self.costs;
        check(k.service >= 1.0, "costs.kSF", "k_SF ≥ 1", k.service);
        check(
            k.progressive > k.service,
            "costs.kPC",
            "k_PC > k_SF",
            k.progressive,
        );
        check(
            k.direct > k.progressive,
            "costs.kDC",
            "k_DC > k_PC",
            k.direct,
        );
        out
    }

    pub fn validate(&self) -> Result<Scenario> {
        let v = self.violations();
        if v.is_empty() {
            Ok(Scenario {
                config: self.clone(),
            })
        } else {
            Err(Error::InvalidScenario(v))
        }
    }
}

/// A validated, immutable problem definition.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    config: ScenarioConfig,
}

impl Scenario {
    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn material(&self, bar: Bar) -> &Material {
        match bar {
            Bar::One => &self.config.material1,
            Bar::Two => &self.config.material2,
        }
    }

    pub fn load(&self) -> &LoadModel {
        &self.config.load
    }

    pub fn rho12(&self) -> f64 {
        self.config.rho12
    }

    pub fn eta(&self) -> f64 {
        self.config.material1.eta
    }

    pub fn impact(&self) -> f64 {
        self.config.load.impact
    }

    pub fn latent(&self) -> &LatentFailure {
        &self.config.latent
    }

    pub fn latent_p(&self, bar: Bar) -> f64 {
        match bar {
            Bar::One => self.config.latent.p1,
            Bar::Two => self.config.latent.p2,
        }
    }

    pub fn redundancy(&self) -> RedundancyKind {
        self.config.redundancy
    }

    pub fn is_passive(&self) -> bool {
        self.config.redundancy == RedundancyKind::Passive
    }

    pub fn standby_engages(&self) -> bool {
        self.config.standby_engages
    }

    pub fn costs(&self) -> &CostMultipliers {
        &self.config.costs
    }

    pub fn covariance(&self) -> CovarianceConvention {
        self.config.covariance_convention
    }

    /// True when bars 1 and 2 are interchangeable (same material and latent
    /// probability, active-passive).
    pub fn is_symmetric(&self) -> bool {
        let c = &self.config;
        c.redundancy == RedundancyKind::ActivePassive
            && c.material1 == c.material2
            && c.latent.p1 == c.latent.p2
    }

    /// Area of `bar` for partial factor `lambda`.
    ///
    /// The passive standby is sized for the amplified load, so its area
    /// carries the impact factor.
    pub fn member_area(&self, lambda: f64, bar: Bar) -> Result<f64> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::Domain(format!(
                "partial load factor must be ≥ 0, got {lambda}"
            )));
        }
        Ok(self.area_with_impact(lambda, bar, self.impact()))
    }

    /// Area for an explicit impact factor; only the passive standby depends on it.
    pub(crate) fn area_with_impact(&self, lambda: f64, bar: Bar, impact: f64) -> f64 {
        let base = lambda * self.load().mean / self.material(bar).mean;
        match (self.redundancy(), bar) {
            (RedundancyKind::Passive, Bar::Two) => base * impact,
            _ => base,
        }
    }

    /// Area from the conventional member-by-member rule with proportional
    /// load sharing, a_i = λ_E μ_P / (2 μ_i).
    pub fn usual_design_area(&self, lambda_e: f64, bar: Bar) -> Result<f64> {
        if lambda_e.is_nan() || lambda_e < 0.0 {
            return Err(Error::Domain(format!(
                "load factor must be ≥ 0, got {lambda_e}"
            )));
        }
        Ok(lambda_e * self.load().mean / (2.0 * self.material(bar).mean))
    }

    pub fn areas(&self, design: &Design) -> (f64, f64) {
        (
            self.area_with_impact(design.lambda1, Bar::One, self.impact()),
            self.area_with_impact(design.lambda2, Bar::Two, self.impact()),
        )
    }
}

/// Partial load factors (λ1, λ2); for passive systems these are (λ_A, λ_P).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Design {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(lambda1 >= 0.0 && lambda2 >= 0.0) {
            return Err(Error::Domain(format!(
                "partial load factors must be ≥ 0, got ({lambda1}, {lambda2})"
            )));
        }
        Ok(Self { lambda1, lambda2 })
    }

    /// Projects onto the side constraints λ ≥ 0.
    pub fn projected(lambda1: f64, lambda2: f64) -> Self {
        Self {
            lambda1: lambda1.max(0.0),
            lambda2: lambda2.max(0.0),
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            lambda1: self.lambda2,
            lambda2: self.lambda1,
        }
    }

    pub fn lambda(&self, bar: Bar) -> f64 {
        match bar {
            Bar::One => self.lambda1,
            Bar::Two => self.lambda2,
        }
    }

    /// No material at all; nothing is built.
    pub fn is_degenerate(&self) -> bool {
        self.lambda1 == 0.0 && self.lambda2 == 0.0
    }
}

/// Force carried by bar 1 under equal-strain load sharing, N1 = P a1/(a1 + a2).
/// Bar 2 carries `p - N1`.
pub fn load_fraction(a1: f64, a2: f64, p: f64) -> Result<f64> {
    if !(a1 >= 0.0 && a2 >= 0.0) || a1 + a2 <= 0.0 {
        return Err(Error::Domain(format!(
            "load sharing needs nonnegative areas with a positive sum, got ({a1}, {a2})"
        )));
    }
    Ok(p * a1 / (a1 + a2))
}

/// General stiffness-proportional split N1 = P k1/(k1 + k2) with k = E a / L.
pub fn stiffness_load_fraction(k1: f64, k2: f64, p: f64) -> Result<f64> {
    load_fraction(k1, k2, p)
}
