//! Monte Carlo walk of the full event trees.
//!
//! Each replicate draws its own strengths, both load pulses and both
//! connection outcomes, then follows the tree: connection losses on first
//! loading, primary failure, redistribution with residual strength η and the
//! impact factor, and a second static load application. Replicates are split
//! into fixed-size chunks; chunk `k` uses ChaCha8 stream `k` of `seed`, so the
//! estimate does not depend on the thread schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{material_cost, CostBreakdown};
use crate::error::{Error, Result};
use crate::model::{Bar, Design, RedundancyKind, Scenario};

pub const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Outcome {
    Survives,
    ServiceFailure(Bar),
    Progressive,
    Direct,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    none: u64,
    sf: u64,
    pc: u64,
    dc: u64,
    /// Σ λ of the replaced bar over SF replicates, and its square.
    sf_lambda: f64,
    sf_lambda_sq: f64,
}

impl Tally {
    fn add(&mut self, o: Outcome, design: &Design) {
        match o {
            Outcome::Survives => self.none += 1,
            Outcome::ServiceFailure(bar) => {
                self.sf += 1;
                let l = design.lambda(bar);
                self.sf_lambda += l;
                self.sf_lambda_sq += l * l;
            }
            Outcome::Progressive => self.pc += 1,
            Outcome::Direct => self.dc += 1,
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.none += o.none;
        self.sf += o.sf;
        self.pc += o.pc;
        self.dc += o.dc;
        self.sf_lambda += o.sf_lambda;
        self.sf_lambda_sq += o.sf_lambda_sq;
        self
    }
}

/// Replicate counts by consequence class; they sum to `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub none: u64,
    pub sf: u64,
    pub pc: u64,
    pub dc: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    fn proportion(count: u64, n: u64) -> Self {
        let p = count as f64 / n as f64;
        Self {
            value: p,
            se: (p * (1.0 - p) / n as f64).sqrt(),
        }
    }

    /// |value − reference| in standard errors; infinite when SE is zero and
    /// the values differ.
    pub fn z(&self, reference: f64) -> f64 {
        let d = self.value - reference;
        if d == 0.0 {
            0.0
        } else {
            d / self.se
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub n: u64,
    pub seed: u64,
    pub counts: ClassCounts,
    pub p_sys: Estimate,
    pub p_sf: Estimate,
    pub p_pc: Estimate,
    pub p_dc: Estimate,
    /// Component costs; `material` is exact.
    pub costs: CostBreakdown,
    pub sf_cost: Estimate,
    pub pc_cost: Estimate,
    pub dc_cost: Estimate,
    pub total_cost: Estimate,
}

/// One replicate's random inputs.
struct Draw {
    s1: f64,
    s2: f64,
    p1: f64,
    p2: f64,
    c1_lost: bool,
    c2_lost: bool,
}

struct Tree {
    kind: RedundancyKind,
    a1: f64,
    a2: f64,
    mu1: f64,
    sd1: f64,
    mu2: f64,
    sd2: f64,
    rho: f64,
    rho_c: f64,
    mu_p: f64,
    sd_p: f64,
    eta: f64,
    f: f64,
    pl1: f64,
    pl2: f64,
    engages: bool,
}

impl Tree {
    fn new(s: &Scenario, d: &Design) -> Self {
        let (a1, a2) = s.areas(d);
        let m1 = s.material(Bar::One);
        let m2 = s.material(Bar::Two);
        let rho = s.rho12();
        Self {
            kind: s.redundancy(),
            a1,
            a2,
            mu1: m1.mean,
            sd1: m1.std_dev(),
            mu2: m2.mean,
            sd2: m2.std_dev(),
            rho,
            rho_c: (1.0 - rho * rho).sqrt(),
            mu_p: s.load().mean,
            sd_p: s.load().std_dev(),
            eta: s.eta(),
            f: s.impact(),
            pl1: s.latent_p(Bar::One),
            pl2: s.latent_p(Bar::Two),
            engages: s.standby_engages(),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Draw {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let zp1: f64 = rng.sample(StandardNormal);
        let zp2: f64 = rng.sample(StandardNormal);
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        Draw {
            s1: self.mu1 + self.sd1 * z1,
            s2: self.mu2 + self.sd2 * (self.rho * z1 + self.rho_c * z2),
            p1: self.mu_p + self.sd_p * zp1,
            p2: self.mu_p + self.sd_p * zp2,
            c1_lost: u1 < self.pl1,
            c2_lost: u2 < self.pl2,
        }
    }

    fn walk(&self, d: &Draw) -> Outcome {
        match self.kind {
            RedundancyKind::ActivePassive => self.active_passive(d),
            RedundancyKind::Passive => self.passive(d),
        }
    }

    /// A lone bar of capacity `r` takes the amplified first load, then the
    /// second load.
    fn lone_survivor(&self, r: f64, d: &Draw) -> Outcome {
        if r <= self.f * d.p1 {
            Outcome::Direct
        } else if r <= d.p2 {
            Outcome::Progressive
        } else {
            Outcome::Survives
        }
    }

    fn active_passive(&self, d: &Draw) -> Outcome {
        let (r1, r2) = (self.a1 * d.s1, self.a2 * d.s2);
        match (d.c1_lost, d.c2_lost) {
            (true, true) => return Outcome::Direct,
            (true, false) => return self.lone_survivor(r2, d),
            (false, true) => return self.lone_survivor(r1, d),
            (false, false) => {}
        }
        let total = self.a1 + self.a2;
        for (stage, load) in [(1, d.p1), (2, d.p2)] {
            if r1 + r2 <= load {
                return Outcome::Direct;
            }
            let failed = if total * d.s1 <= load {
                Bar::One
            } else if total * d.s2 <= load {
                Bar::Two
            } else {
                continue;
            };
            let (r_fail, r_surv) = match failed {
                Bar::One => (r1, r2),
                Bar::Two => (r2, r1),
            };
            let capacity = r_surv + self.eta * r_fail;
            if capacity <= self.f * load {
                return Outcome::Progressive;
            }
            if stage == 1 && capacity <= d.p2 {
                return Outcome::Progressive;
            }
            return Outcome::ServiceFailure(failed);
        }
        Outcome::Survives
    }

    fn passive(&self, d: &Draw) -> Outcome {
        let (r1, r2) = (self.a1 * d.s1, self.a2 * d.s2);
        if d.c1_lost {
            if d.c2_lost {
                return Outcome::Direct;
            }
            return self.lone_survivor(r2, d);
        }
        for (stage, load) in [(1, d.p1), (2, d.p2)] {
            if r1 > load {
                continue;
            }
            if d.c2_lost {
                return Outcome::Direct;
            }
            if self.engages && r1 + r2 <= self.f * load {
                return Outcome::Direct;
            }
            let capacity = r2 + self.eta * r1;
            if capacity <= self.f * load {
                return Outcome::Direct;
            }
            if stage == 1 && capacity <= d.p2 {
                return Outcome::Progressive;
            }
            return Outcome::ServiceFailure(Bar::One);
        }
        Outcome::Survives
    }
}

fn run_chunk(tree: &Tree, design: &Design, seed: u64, chunk: u64, len: u64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut t = Tally::default();
    for _ in 0..len {
        let d = tree.draw(&mut rng);
        t.add(tree.walk(&d), design);
    }
    t
}

/// Plain Monte Carlo estimate of failure-class probabilities and expected cost.
pub fn simulate_system(
    scenario: &Scenario,
    design: &Design,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::Domain("Monte Carlo sample count must be ≥ 1".into()));
    }
    let tree = Tree::new(scenario, design);
    let chunks = n.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = CHUNK.min(n - k * CHUNK);
            run_chunk(&tree, design, seed, k, len)
        })
        .reduce(Tally::default, Tally::merge);

    let k = scenario.costs();
    let nf = n as f64;
    let material = material_cost(design, scenario);

    let sf_mean = k.service * tally.sf_lambda / nf;
    let sf_sq = k.service * k.service * tally.sf_lambda_sq / nf;
    let pc_p = tally.pc as f64 / nf;
    let dc_p = tally.dc as f64 / nf;
    // Per-replicate failure cost X takes one of k_SF·λ, k_PC, k_DC or 0.
    let mean = sf_mean + k.progressive * pc_p + k.direct * dc_p;
    let second = sf_sq + k.progressive.powi(2) * pc_p + k.direct.powi(2) * dc_p;
    let var = (second - mean * mean).max(0.0);
    let sf_var = (sf_sq - sf_mean * sf_mean).max(0.0);

    let p_pc = Estimate::proportion(tally.pc, n);
    let p_dc = Estimate::proportion(tally.dc, n);
    Ok(McEstimate {
        n,
        seed,
        counts: ClassCounts {
            none: tally.none,
            sf: tally.sf,
            pc: tally.pc,
            dc: tally.dc,
        },
        p_sys: Estimate::proportion(tally.pc + tally.dc, n),
        p_sf: Estimate::proportion(tally.sf, n),
        p_pc,
        p_dc,
        costs: CostBreakdown {
            material,
            sf: sf_mean,
            pc: k.progressive * p_pc.value,
            dc: k.direct * p_dc.value,
            total: material + mean,
        },
        sf_cost: Estimate {
            value: sf_mean,
            se: (sf_var / nf).sqrt(),
        },
        pc_cost: Estimate {
            value: k.progressive * p_pc.value,
            se: k.progressive * p_pc.se,
        },
        dc_cost: Estimate {
            value: k.direct * p_dc.value,
            se: k.direct * p_dc.se,
        },
        total_cost: Estimate {
            value: material + mean,
            se: (var / nf).sqrt(),
        },
    })
}
