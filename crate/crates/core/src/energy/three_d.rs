//! Electromagnetic field between two parallel plates at separation a.
//!
//! ε* = ε / (ħcπ²/720a⁴).

use std::f64::consts::{LN_2, PI};

use super::series::{small_series, upper_limit_remainder};
use super::{
    check_large_window, check_small_window, eps_undeformed, inner_spec, planck, sqrt_one_minus_sq,
    BetaStar, Dimension, EnergyResult, InnerFailure, Method,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, Endpoint, QuadratureError, QuadratureSpec};
use crate::specialfn::{bernoulli, binomial_half, gamma_half, zeta};

/// Highest inverse power of β* in the bracket of [`eps3d_series_large`].
pub const MAX_LARGE_ORDER: u32 = 62;

/// Below this modulus the numerator is evaluated from its Taylor series.
const NUMERATOR_SERIES_BELOW: f64 = 0.25;

fn result(
    beta_star: BetaStar,
    method: Method,
    eps_star: f64,
    error_estimate: f64,
    order: Option<u32>,
) -> EnergyResult {
    EnergyResult {
        dimension: Dimension::D3,
        beta_star,
        method,
        eps_star,
        error_estimate,
        order,
    }
}

/// [(2k³ − k)√(1 − k²) + arcsin k] / k³ = 8 ∫₀¹ u²√(1 − k²u²) du.
///
/// The closed form cancels to O(k³) at small k, so the series is used there.
pub(crate) fn numerator_over_cube(k: f64) -> f64 {
    if k < NUMERATOR_SERIES_BELOW {
        let k2 = k * k;
        let mut sum = 0.0;
        let mut power = 1.0;
        for j in 0..40u32 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * binomial_half(j) * power / (2 * j + 3) as f64;
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
            power *= k2;
        }
        8.0 * sum
    } else {
        ((2.0 * k * k * k - k) * sqrt_one_minus_sq(k) + k.min(1.0).asin()) / (k * k * k)
    }
}

/// ε* = −(90/β*²) ∫₀^{1/β*} [(2β*²t³ − t)√(1 − (β*t)²) + arcsin(β*t)/β*] / (e^{2πt} − 1) dt.
pub fn eps3d_integral(beta_star: BetaStar, spec: &QuadratureSpec) -> Result<EnergyResult> {
    if beta_star.is_zero() {
        return Ok(eps_undeformed(Dimension::D3));
    }
    let b = beta_star.value();
    // numerator = β*² t³ · numerator_over_cube(β*t)
    let q = integrate_finite(
        |t| t * t * planck(t) * numerator_over_cube(b * t),
        0.0,
        1.0 / b,
        spec,
        Endpoint::SqrtSingularRight,
    )?;
    Ok(result(
        beta_star,
        Method::Integral,
        -90.0 * q.value,
        90.0 * q.error_estimate,
        None,
    ))
}

/// ∫_{−t}^{t} x² √(1 − (β*x)²) dx by quadrature.
pub(crate) fn slab_integral(
    b: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> std::result::Result<f64, QuadratureError> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let q = integrate_finite(
        |x| x * x * sqrt_one_minus_sq(b * x),
        0.0,
        t,
        spec,
        Endpoint::SqrtSingularRight,
    )?;
    Ok(2.0 * q.value)
}

/// ε* = −360 ∫₀^{1/β*} dt (e^{2πt} − 1)^{−1} ∫_{−t}^{t} x²√(1 − (β*x)²) dx, as nested quadrature.
pub fn eps3d_double_integral(beta_star: BetaStar, spec: &QuadratureSpec) -> Result<EnergyResult> {
    if beta_star.is_zero() {
        return Ok(eps_undeformed(Dimension::D3));
    }
    let b = beta_star.value();
    let inner = inner_spec(spec);
    let failure = InnerFailure::default();
    let outer = integrate_finite(
        |t| {
            if t == 0.0 {
                return 0.0;
            }
            planck(t) / t * failure.capture(slab_integral(b, t, &inner))
        },
        0.0,
        1.0 / b,
        spec,
        Endpoint::SqrtSingularRight,
    );
    let q = failure.finish(outer)?;
    Ok(result(
        beta_star,
        Method::DoubleIntegral,
        -360.0 * q.value,
        360.0 * q.error_estimate,
        None,
    ))
}

/// I(n) = ∫₀¹ xⁿ [(2x² − 1)√(1 − x²) + arcsin(x)/x] dx from its closed forms.
///
/// Only n ≤ 1 and even n are needed: odd Bernoulli numbers above B₁ vanish.
pub fn coefficient_i(n: u32) -> Result<f64> {
    match n {
        0 => Ok(0.5 * PI * (LN_2 - 0.25)),
        1 => Ok(0.5 * PI - 16.0 / 15.0),
        n if n % 2 == 0 => {
            let m = n / 2;
            let mf = m as f64;
            Ok(PI / (4.0 * mf)
                - 2.0 * gamma_half(3)? * gamma_half(2 * m as i32 + 3)?
                    / (mf * gamma_half(2 * m as i32 + 6)?))
        }
        n => Err(Error::Domain {
            what: "I(n) index (odd n >= 3 not defined)",
            value: n as f64,
        }),
    }
}

/// I(n) by direct quadrature of its defining integral.
pub fn coefficient_i_by_quadrature(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    let q = integrate_finite(
        |x| x.powi(n as i32) * ((2.0 * x * x - 1.0) * sqrt_one_minus_sq(x) + x.asin() / x),
        0.0,
        1.0,
        spec,
        Endpoint::SqrtSingularRight,
    )?;
    Ok(q.value)
}

/// Coefficient of β*^{−p} inside the braces of ε* = −(45/β*³){ ½(ln2 − ¼) − (π/2 − 16/15)/β* + π²/24β*² + … }.
pub fn large_coefficient(p: u32) -> Result<f64> {
    Ok(match p {
        0 => 0.5 * (LN_2 - 0.25),
        1 => -(0.5 * PI - 16.0 / 15.0),
        p if p % 2 == 1 => 0.0,
        p => {
            let n = p / 2;
            let nf = n as f64;
            // (2n+1)! / (2^{2n−1} (n!)²) = 2(2n+1) C(2n, n) / 4ⁿ
            let central: f64 = (1..=n)
                .map(|i| (2 * i - 1) as f64 / (2 * i) as f64)
                .product();
            let ratio = 2.0 * (2.0 * nf + 1.0) * central / ((nf + 1.0) * (nf + 2.0));
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * zeta(2 * n as i32)? / (2.0 * nf) * (1.0 - ratio)
        }
    })
}

/// The same bracket coefficient assembled from Bₚ (2π)ᵖ I(p) / (p! π).
pub fn large_coefficient_from_bernoulli(p: u32) -> Result<f64> {
    if p >= 3 && p % 2 == 1 {
        return Ok(0.0);
    }
    let scale: f64 = (1..=p).map(|k| 2.0 * PI / k as f64).product();
    Ok(bernoulli(p as usize)? * scale * coefficient_i(p)? / PI)
}

/// Coefficient a_k of β*^{2k} in ε* = −(1 − β*²/7 − 3β*⁴/112 − …).
pub fn small_coefficient(k: u32) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let kf = k as f64;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let factorial: f64 = (1..=k).map(f64::from).product();
    let s = gamma_half(2 * k as i32 - 1)? * sign * bernoulli(2 * k as usize + 4)?
        / (factorial * PI.sqrt() * 2.0 * (2.0 * kf + 4.0) * (2.0 * kf + 3.0));
    Ok(-360.0 * s)
}

pub fn eps3d_series_small(beta_star: BetaStar, order: u32) -> Result<EnergyResult> {
    let b = beta_star.value();
    check_small_window(b, order)?;
    let s = small_series(small_coefficient, b, order)?;
    Ok(result(
        beta_star,
        Method::SeriesSmallBeta,
        -s.value,
        s.first_omitted + s.rounding + upper_limit_remainder(b, 240.0, 3),
        Some(s.order),
    ))
}

/// Large-β* series with the bracket summed through β*^{−order}.
pub fn eps3d_series_large(beta_star: BetaStar, order: u32) -> Result<EnergyResult> {
    let b = beta_star.value();
    check_large_window(Method::SeriesLargeBeta, b)?;
    if order > MAX_LARGE_ORDER {
        return Err(Error::Domain {
            what: "large-beta* series order",
            value: order as f64,
        });
    }
    let inv = 1.0 / b;
    let terms = (0..=order)
        .map(|p| Ok(large_coefficient(p)? * inv.powi(p as i32)))
        .collect::<Result<Vec<f64>>>()?;
    let bracket: f64 = terms.iter().rev().sum();
    let next = if order == 0 {
        1
    } else {
        order + 1 + (order + 1) % 2
    };
    let omitted = (large_coefficient(next)? * inv.powi(next as i32)).abs() / (1.0 - inv * inv)
        + 2.0 * f64::EPSILON * terms.iter().map(|t| t.abs()).sum::<f64>();
    let prefactor = 45.0 * inv.powi(3);
    Ok(result(
        beta_star,
        Method::SeriesLargeBeta,
        -prefactor * bracket,
        prefactor * omitted,
        Some(order),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(v: f64) -> BetaStar {
        BetaStar::new(v).unwrap()
    }

    // 30-digit quadrature (mpmath), frozen
    const ORACLE: [(f64, f64); 5] = [
        (0.2, -0.994_241_568_332_145_372),
        (1.0, -0.783_887_371_746_865_144),
        (5.0, -0.049_286_728_056_680_843),
        (10.0, -0.007_886_451_979_336_437),
        (1000.0, -9.948_144_233_392_881e-9),
    ];

    #[test]
    fn numerator_branches_agree() {
        for k in [0.05_f64, 0.2, 0.249_999, 0.25, 0.3] {
            let direct = ((2.0 * k * k * k - k) * (1.0 - k * k).sqrt() + k.asin()) / (k * k * k);
            assert!(
                (numerator_over_cube(k) - direct).abs() < 1e-11 / (k * k),
                "k = {k}"
            );
        }
        assert!((numerator_over_cube(0.0) - 8.0 / 3.0).abs() < 1e-15);
        assert!((numerator_over_cube(1.0) - PI / 2.0).abs() < 1e-15);
        // continuity across the switch
        let lo = numerator_over_cube(NUMERATOR_SERIES_BELOW * (1.0 - 1e-15));
        let hi = numerator_over_cube(NUMERATOR_SERIES_BELOW);
        assert!((lo - hi).abs() < 1e-13, "{lo} {hi}");
    }

    #[test]
    fn integral_matches_reference_values() {
        let spec = QuadratureSpec::default();
        for (b, expected) in ORACLE {
            let r = eps3d_integral(beta(b), &spec).unwrap();
            assert!(
                ((r.eps_star - expected) / expected).abs() < 1e-11,
                "beta* = {b}: {}",
                r.eps_star
            );
        }
    }

    #[test]
    fn double_integral_matches_reference_values() {
        let spec = QuadratureSpec::default();
        for (b, expected) in ORACLE.iter().take(3) {
            let r = eps3d_double_integral(beta(*b), &spec).unwrap();
            assert!(
                ((r.eps_star - expected) / expected).abs() < 1e-10,
                "beta* = {b}: {}",
                r.eps_star
            );
        }
    }

    #[test]
    fn undeformed_limits() {
        let spec = QuadratureSpec::default();
        let r = eps3d_integral(beta(1e-4), &spec).unwrap();
        assert!((r.eps_star + 1.0).abs() < 1e-6);
        let d = eps3d_double_integral(beta(1e-4), &spec).unwrap();
        assert!((d.eps_star + 1.0).abs() < 1e-5);
    }

    #[test]
    fn slab_recovers_undeformed_cube() {
        let spec = QuadratureSpec::default();
        for t in [0.1, 1.0, 3.0] {
            let v = slab_integral(1e-7, t, &spec).unwrap();
            assert!((v - 2.0 / 3.0 * t * t * t).abs() < 1e-12 * t * t * t);
        }
    }

    #[test]
    fn i_closed_forms() {
        assert!((coefficient_i(0).unwrap() - PI / 2.0 * (LN_2 - 0.25)).abs() < 1e-16);
        assert!((coefficient_i(1).unwrap() - (PI / 2.0 - 16.0 / 15.0)).abs() < 1e-16);
        assert!((coefficient_i(2).unwrap() - PI / 8.0).abs() < 1e-15);
        assert!(coefficient_i(3).is_err());
        let spec = QuadratureSpec::with_rel_tol(1e-13).unwrap();
        for n in [0, 1, 2, 4, 6, 10] {
            let closed = coefficient_i(n).unwrap();
            let quad = coefficient_i_by_quadrature(n, &spec).unwrap();
            assert!((closed - quad).abs() < 1e-12, "I({n}): {closed} vs {quad}");
        }
    }

    #[test]
    fn large_bracket_printed_terms() {
        assert!((large_coefficient(2).unwrap() - PI * PI / 24.0).abs() < 1e-15);
        // zeta(2)/2 · (1 − 3!/(2·1·2·3))
        let by_hand = PI * PI / 6.0 / 2.0 * (1.0 - 6.0 / 12.0);
        assert!((large_coefficient(2).unwrap() - by_hand).abs() < 1e-15);
        for p in [0, 1, 2, 3, 4, 6, 8, 20] {
            let a = large_coefficient(p).unwrap();
            let b = large_coefficient_from_bernoulli(p).unwrap();
            assert!(
                (a - b).abs() <= 1e-13 * a.abs().max(1e-300),
                "p = {p}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn large_series_against_integral() {
        let spec = QuadratureSpec::default();
        let integral = eps3d_integral(beta(10.0), &spec).unwrap();
        let r = eps3d_series_large(beta(10.0), 10).unwrap();
        assert!(((r.eps_star - integral.eps_star) / integral.eps_star).abs() <= 1e-4);
        let full = eps3d_series_large(beta(10.0), MAX_LARGE_ORDER).unwrap();
        assert!(((full.eps_star - integral.eps_star) / integral.eps_star).abs() <= 1e-12);
        assert!(eps3d_series_large(beta(0.9), 4).is_err());
    }

    #[test]
    fn small_series_printed_coefficients() {
        let printed = [1.0, -1.0 / 7.0, -3.0 / 112.0, -5.0 / 264.0];
        for (k, p) in printed.iter().enumerate() {
            let g = small_coefficient(k as u32).unwrap();
            assert!(((g - p) / p).abs() <= 1e-14, "k = {k}: {g} vs {p}");
        }
        assert_eq!(
            eps3d_series_small(BetaStar::zero(), 8).unwrap().eps_star,
            -1.0
        );
    }

    #[test]
    fn small_series_against_integral() {
        let r = eps3d_series_small(beta(0.2), 16).unwrap();
        let truncated = -(1.0 - 0.04 / 7.0 - 3.0 * 0.0016 / 112.0);
        let integral = ORACLE[0].1;
        assert!((r.eps_star - integral).abs() <= 3.0 * r.error_estimate);
        assert!((truncated - integral).abs() <= 3.0 * (5.0 / 264.0) * 0.2f64.powi(6));
    }
}
