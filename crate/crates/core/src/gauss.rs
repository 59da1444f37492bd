//! Standard normal distribution and reliability-index conversions.
//!
//! Every probability in the crate goes through [`std_normal_cdf`], which is
//! written in terms of the complementary error function so that lower-tail
//! values keep full relative precision down to the subnormal range. Computing
//! `1 - Φ(x)` directly would lose everything below ~1e-16.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Φ(x). Saturates to exactly 0 or 1 for ±∞.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density φ(x).
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

// Acklam's rational approximation, |relative error| < 1.15e-9 before refinement.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.024_25;

fn acklam_lower(p: f64) -> f64 {
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Quantile for p ≤ 0.5, refined with Halley steps.
///
/// The correction is formed from the ratio Φ(x)/p rather than the difference
/// Φ(x) − p, which would underflow in the far tail.
fn lower_quantile(p: f64) -> f64 {
    let mut x = acklam_lower(p);
    for _ in 0..2 {
        let cdf = std_normal_cdf(x);
        if cdf == 0.0 {
            break;
        }
        let rel = cdf / p - 1.0;
        // u = (Φ(x) − p) / φ(x), with p/φ(x) evaluated in log space.
        let log_ratio = p.ln() + 0.5 * x * x + 0.5 * (2.0 * PI).ln();
        let u = rel * log_ratio.exp();
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// Φ⁻¹(p). Returns ∓∞ for p ∈ {0, 1}; errors outside [0, 1] or on NaN.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "normal quantile requires p in [0, 1], got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    if p <= 0.5 {
        Ok(lower_quantile(p))
    } else {
        Ok(-lower_quantile(1.0 - p))
    }
}

/// Failure probability for a reliability index: p = Φ(−β).
pub fn beta_to_pf(beta: f64) -> f64 {
    std_normal_cdf(-beta)
}

/// Reliability index for a failure probability: β = −Φ⁻¹(p).
pub fn pf_to_beta(p: f64) -> Result<f64> {
    std_normal_quantile(p).map(|x| -x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn cdf_reference_values() {
        // 50-digit reference values.
        let cases = [
            (0.0, 0.5),
            (-1.0, 0.158_655_253_931_457_05),
            (1.0, 0.841_344_746_068_542_9),
            (-0.5, 0.308_537_538_725_986_9),
            (2.5, 0.993_790_334_674_223_8),
            (-3.268, 5.415_518_281_703_057e-4),
            (-3.090, 1.000_782_476_614_010_4e-3),
            (-5.0, 2.866_515_718_791_939e-7),
            (-8.0, 6.220_960_574_271_784e-16),
            (8.0, 0.999_999_999_999_999_4),
        ];
        for (x, want) in cases {
            let got = std_normal_cdf(x);
            assert!(
                (got - want).abs() <= 1e-15,
                "Φ({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn cdf_far_tail_relative() {
        let cases = [
            (-10.0, 7.619_853_024_160_526e-24),
            (-20.0, 2.753_624_118_606_233_7e-89),
            (-30.0, 4.906_713_927_148_187e-198),
            (-37.0, 5.725_571_222_524_577e-300),
        ];
        for (x, want) in cases {
            let got = std_normal_cdf(x);
            assert!(
                rel_err(got, want) <= 1e-12,
                "Φ({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn cdf_saturates() {
        assert_eq!(std_normal_cdf(f64::INFINITY), 1.0);
        assert_eq!(std_normal_cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(beta_to_pf(f64::INFINITY), 0.0);
    }

    #[test]
    fn quantile_reference_values() {
        let cases = [
            (1e-3, -3.090_232_306_167_813_5),
            (2.5e-7, -5.026_312_836_056_685),
            (1.63e-3, -2.942_094_905_599_6),
            (1e-15, -7.941_345_326_170_997),
            (1e-300, -37.047_096_299_361_2),
            (0.975, 1.959_963_984_540_054_2),
            (1e-2, -2.326_347_874_040_841),
        ];
        for (p, want) in cases {
            let got = std_normal_quantile(p).unwrap();
            assert!(rel_err(got, want) <= 1e-13, "Φ⁻¹({p}) = {got}, want {want}");
        }
        assert_eq!(std_normal_quantile(0.5).unwrap(), 0.0);
    }

    #[test]
    fn quantile_edges_and_domain() {
        assert_eq!(std_normal_quantile(0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(std_normal_quantile(1.0).unwrap(), f64::INFINITY);
        assert!(std_normal_quantile(-0.1).is_err());
        assert!(std_normal_quantile(1.5).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn latent_index_for_one_in_a_thousand() {
        let beta_l = pf_to_beta(1e-3).unwrap();
        assert!((beta_l - 3.090).abs() < 1e-3);
        let beta = pf_to_beta(1.63e-3).unwrap();
        assert!((beta - 2.942).abs() < 5e-3);
    }

    #[test]
    fn round_trip_small_probability() {
        let p = 2.5e-7;
        let back = std_normal_cdf(std_normal_quantile(p).unwrap());
        assert!(rel_err(back, p) <= 1e-12);
    }
}
