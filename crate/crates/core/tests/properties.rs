use std::f64::consts::LOG10_2;

use proptest::prelude::*;

use redundancy_core::cost::risk_objective;
use redundancy_core::gauss::{std_normal_cdf, std_normal_quantile};
use redundancy_core::harness::{run_contour, Axis, GridSpec, Quantity};
use redundancy_core::model::{
    load_fraction, Bar, CovarianceConvention, Design, RedundancyKind, Scenario, ScenarioConfig,
};
use redundancy_core::optimize::{rbdo_frontier, ro_optimize, FrontierOptions};
use redundancy_core::oracle::simulate_system;
use redundancy_core::reliability::system_failure_probability;

fn scenarios() -> impl Strategy<Value = ScenarioConfig> {
    (
        (1.0..9.0f64, 1.0..9.0f64, 0.03..0.3f64, 0.03..0.3f64),
        (
            prop_oneof![Just(0.0), 0.0..=1.0f64],
            0.1..0.5f64,
            1.0..1.6f64,
            0.0..0.95f64,
        ),
        (-6.0..-0.5f64, -6.0..-0.5f64),
        (any::<bool>(), any::<bool>(), any::<bool>()),
    )
        .prop_map(
            |((m1, m2, d1, d2), (eta, dp, f, rho), (l1, l2), (passive, engages, standard))| {
                let mut c = ScenarioConfig::default();
                c.material1.mean = m1;
                c.material2.mean = m2;
                c.material1.cov = d1;
                c.material2.cov = d2;
                c.material1.eta = eta;
                c.material2.eta = eta;
                c.load.cov = dp;
                c.load.impact = f;
                c.rho12 = rho;
                c.latent.p1 = 10f64.powf(l1);
                c.latent.p2 = 10f64.powf(l2);
                if passive {
                    c.redundancy = RedundancyKind::Passive;
                }
                c.standby_engages = engages;
                if standard {
                    c.covariance_convention = CovarianceConvention::Standard;
                }
                c
            },
        )
}

fn symmetric(c: ScenarioConfig) -> Scenario {
    let mut c = c;
    c.redundancy = RedundancyKind::ActivePassive;
    c.material2 = c.material1;
    c.latent.p2 = c.latent.p1;
    c.validate().unwrap()
}

fn design() -> impl Strategy<Value = Design> {
    (0.0..5.0f64, 0.0..5.0f64).prop_map(|(a, b)| Design::new(a, b).unwrap())
}

proptest! {
    #[test]
    fn cdf_is_monotone_and_symmetric(x in -40.0..40.0f64, h in 0.0..1.0f64) {
        prop_assert!(std_normal_cdf(x) <= std_normal_cdf(x + h));
        prop_assert!((std_normal_cdf(x) + std_normal_cdf(-x) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn quantile_round_trips(e in -15.0..-LOG10_2) {
        let p = 10f64.powf(e);
        let x = std_normal_quantile(p).unwrap();
        prop_assert!((std_normal_cdf(x) - p).abs() <= 1e-12 * p);
        prop_assert_eq!(std_normal_quantile(1.0 - p).unwrap().signum(), 1.0);
    }

    #[test]
    fn area_is_linear_in_lambda(c in scenarios(), l in 0.0..5.0f64, k in 0.0..4.0f64) {
        let s = c.validate().unwrap();
        for bar in [Bar::One, Bar::Two] {
            let a = s.member_area(l, bar).unwrap();
            let b = s.member_area(k * l, bar).unwrap();
            prop_assert!((b - k * a).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn shared_load_sums_to_total(a1 in 0.0..10.0f64, a2 in 1e-6..10.0f64, p in -5.0..50.0f64) {
        let n1 = load_fraction(a1, a2, p).unwrap();
        let n2 = load_fraction(a2, a1, p).unwrap();
        prop_assert!((n1 + n2 - p).abs() <= 1e-12 * (1.0 + p.abs()));
    }

    #[test]
    fn probabilities_stay_in_unit_interval_above_floor(c in scenarios(), d in design()) {
        let floor = c.latent.p1 * c.latent.p2;
        let r = system_failure_probability(&d, &c.validate().unwrap());
        prop_assert!(r.p_sys >= floor && r.p_sys <= 1.0);
        prop_assert!(r.paths.iter().all(|t| (0.0..=1.0).contains(&t.probability)));
        prop_assert!((0.0..=1.0).contains(&r.p_union));
    }

    #[test]
    fn single_bar_designs_cannot_beat_latent_bound(c in scenarios(), l1 in 0.0..100.0f64) {
        let mut c = c;
        c.redundancy = RedundancyKind::ActivePassive;
        let s = c.clone().validate().unwrap();
        let r = system_failure_probability(&Design::new(l1, 0.0).unwrap(), &s);
        // A zero-area bar survives only a negative load.
        let (p1, p2) = (c.latent.p1, c.latent.p2);
        let bound = p1 * (1.0 - p2) * std_normal_cdf(1.0 / c.load.cov) + p1 * p2;
        prop_assert!(r.p_sys >= bound * (1.0 - 1e-12), "{} < {}", r.p_sys, bound);
    }

    #[test]
    fn symmetric_scenarios_are_symmetric(c in scenarios(), d in design()) {
        let s = symmetric(c);
        let a = system_failure_probability(&d, &s);
        let b = system_failure_probability(&d.swapped(), &s);
        prop_assert!((a.p_sys - b.p_sys).abs() <= 1e-14);
        let (x, y) = (risk_objective(&d, &s), risk_objective(&d.swapped(), &s));
        prop_assert!((x.total - y.total).abs() <= 1e-12);
    }

    #[test]
    fn total_is_sum_of_components(c in scenarios(), d in design()) {
        let k = risk_objective(&d, &c.validate().unwrap());
        prop_assert!((k.material + k.sf + k.pc + k.dc - k.total).abs() <= 1e-12);
        prop_assert!(k.sf >= 0.0 && k.pc >= 0.0 && k.dc >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simulation_is_deterministic(c in scenarios(), d in design(), seed in any::<u64>()) {
        let s = c.validate().unwrap();
        let a = simulate_system(&s, &d, 3_000, seed).unwrap();
        let b = simulate_system(&s, &d, 3_000, seed).unwrap();
        prop_assert_eq!(&a, &b);
        let k = a.counts;
        prop_assert_eq!(k.none + k.sf + k.pc + k.dc, 3_000);
    }

    #[test]
    fn contour_of_symmetric_scenario_is_symmetric(c in scenarios()) {
        let s = symmetric(c);
        let axis = Axis::new(0.0, 2.0, 0.25);
        for quantity in [Quantity::BetaSys, Quantity::RoTotal] {
            let g = GridSpec { lambda1: axis, lambda2: axis, quantity };
            let pts = run_contour(&s, &g).unwrap();
            let n = 9;
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (pts[i * n + j].2, pts[j * n + i].2);
                    prop_assert!(a == b || (a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{quantity:?} ({i},{j}) {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn frontier_is_nonincreasing(p in -3.0..-1.5f64, beta_t in 3.2..3.8f64) {
        let s = ScenarioConfig::default().with_latent(10f64.powf(p)).validate().unwrap();
        let grid: Vec<f64> = (0..=30).map(|k| k as f64 * 0.1).collect();
        let pts = rbdo_frontier(&s, beta_t, &grid, &FrontierOptions::default()).unwrap();
        let req: Vec<f64> = pts.iter().filter_map(|p| p.lambda2_required).collect();
        for w in req.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-4, "{:?}", w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn risk_optimum_is_no_worse_than_fine_grid(c in scenarios()) {
        let s = c.validate().unwrap();
        let best = ro_optimize(&s).costs.total;
        let n = 200;
        let h = 3.0 / (n - 1) as f64;
        let mut grid_min = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let d = Design::new(i as f64 * h, j as f64 * h).unwrap();
                grid_min = grid_min.min(risk_objective(&d, &s).total);
            }
        }
        prop_assert!(best <= grid_min + 1e-9, "optimum {best} > grid {grid_min}");
    }
}
