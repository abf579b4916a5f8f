//! Field in a stripe of width a in the plane.
//!
//! ε* = ε / (ħcζ(3)/16πa³). The inner x-integral
//!
//! ```text
//! F(k) = ∫₀¹ x² √((1 − k²x²)/(1 − x²)) dx = ⅓(2 − 1/k²) E(k) + ⅓(1/k² − 1) K(k)
//! ```
//!
//! is evaluated through complete elliptic integrals in [`eps2d_integral`] and by
//! direct quadrature in [`eps2d_double_integral`].

use std::f64::consts::{FRAC_PI_2, PI};

use super::series::small_series;
use super::{
    check_large_window, check_small_window, eps_undeformed, inner_spec, planck, sqrt_one_minus_sq,
    BetaStar, Dimension, EnergyResult, InnerFailure, Method,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, Endpoint, QuadratureError, QuadratureSpec};
use crate::specialfn::{
    bernoulli, binomial_half, catalan, elliptic_e, elliptic_k, gamma_half, zeta, K_MODULUS_GUARD,
};

/// Highest inverse power of β* in the bracket of [`eps2d_series_large`].
pub const MAX_LARGE_ORDER: u32 = 60;
/// Bracket order used when the caller does not choose one.
pub const DEFAULT_LARGE_ORDER: u32 = 30;

/// Below this modulus F(k) is summed from its Taylor series; (E − K)/k² cancels badly there.
const BRACKET_SERIES_BELOW: f64 = 0.25;

fn result(
    beta_star: BetaStar,
    method: Method,
    eps_star: f64,
    error_estimate: f64,
    order: Option<u32>,
) -> EnergyResult {
    EnergyResult {
        dimension: Dimension::D2,
        beta_star,
        method,
        eps_star,
        error_estimate,
        order,
    }
}

fn normalizer() -> f64 {
    16.0 * PI * PI / zeta(3).expect("zeta(3) is defined")
}

/// F(k) through the elliptic-integral reduction, 0 ≤ k ≤ 1.
pub fn elliptic_bracket(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain {
            what: "elliptic bracket modulus",
            value: k,
        });
    }
    if k < BRACKET_SERIES_BELOW {
        // Σ C(1/2, m) (−k²)^m ∫₀¹ x^{2m+2}/√(1−x²) dx, the moment being (π/2)(2m+1)!!/(2m+2)!!
        let k2 = k * k;
        let mut moment = PI / 4.0;
        let mut power = 1.0;
        let mut sum = 0.0;
        for m in 0..60u32 {
            let term = binomial_half(m) * power * moment;
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
            power *= -k2;
            moment *= (2 * m + 3) as f64 / (2 * m + 4) as f64;
        }
        return Ok(sum);
    }
    let inv_k2 = 1.0 / (k * k);
    let e_part = (2.0 - inv_k2) * elliptic_e(k)? / 3.0;
    let k_part = if k < 1.0 - K_MODULUS_GUARD {
        (inv_k2 - 1.0) * elliptic_k(k)? / 3.0
    } else {
        // K(k) = ln(4/k′) + O(k′² ln k′) and the prefactor is O(k′²)
        let kp = sqrt_one_minus_sq(k);
        if kp == 0.0 {
            0.0
        } else {
            kp * kp * inv_k2 * (4.0 / kp).ln() / 3.0
        }
    };
    Ok(e_part + k_part)
}

/// F(k) by quadrature of its defining integral.
pub fn elliptic_bracket_by_quadrature(
    k: f64,
    spec: &QuadratureSpec,
) -> std::result::Result<f64, QuadratureError> {
    // x = sin θ removes the 1/√(1 − x²) endpoint
    let q = integrate_finite(
        |theta| {
            let x = theta.sin();
            x * x * sqrt_one_minus_sq(k * x)
        },
        0.0,
        FRAC_PI_2,
        spec,
        Endpoint::Smooth,
    )?;
    Ok(q.value)
}

/// ε* = −(16π²/ζ(3)) ∫₀^{1/β*} t² F(β*t) / (e^{2πt} − 1) dt with F from E and K.
pub fn eps2d_integral(beta_star: BetaStar, spec: &QuadratureSpec) -> Result<EnergyResult> {
    if beta_star.is_zero() {
        return Ok(eps_undeformed(Dimension::D2));
    }
    let b = beta_star.value();
    let q = integrate_finite(
        |t| {
            let k = (b * t).min(1.0);
            t * planck(t) * elliptic_bracket(k).unwrap_or(f64::NAN)
        },
        0.0,
        1.0 / b,
        spec,
        Endpoint::SqrtSingularRight,
    )?;
    let norm = normalizer();
    Ok(result(
        beta_star,
        Method::Integral,
        -norm * q.value,
        norm * q.error_estimate,
        None,
    ))
}

/// Same quantity with the x-integral done by nested quadrature instead of E and K.
pub fn eps2d_double_integral(beta_star: BetaStar, spec: &QuadratureSpec) -> Result<EnergyResult> {
    if beta_star.is_zero() {
        return Ok(eps_undeformed(Dimension::D2));
    }
    let b = beta_star.value();
    let inner = inner_spec(spec);
    let failure = InnerFailure::default();
    let outer = integrate_finite(
        |t| {
            let k = (b * t).min(1.0);
            t * planck(t) * failure.capture(elliptic_bracket_by_quadrature(k, &inner))
        },
        0.0,
        1.0 / b,
        spec,
        Endpoint::SqrtSingularRight,
    );
    let q = failure.finish(outer)?;
    let norm = normalizer();
    Ok(result(
        beta_star,
        Method::DoubleIntegral,
        -norm * q.value,
        norm * q.error_estimate,
        None,
    ))
}

/// J(n) = ∫₀¹ dx x²/√(1 − x²) ∫₀¹ dy y^{n+1} √(1 − x²y²).
///
/// Closed forms for n ≤ 2, nested quadrature beyond.
pub fn coefficient_j(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    match n {
        0 => Ok((PI / 2.0 - 2.0 / 3.0) / 3.0),
        1 => Ok(catalan() / 4.0 - 1.0 / 24.0),
        2 => Ok(2.0 / 15.0),
        n => coefficient_j_by_quadrature(n, spec),
    }
}

pub fn coefficient_j_by_quadrature(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    let inner = inner_spec(spec);
    let failure = InnerFailure::default();
    let outer = integrate_finite(
        |theta| {
            let x = theta.sin();
            let y_integral = integrate_finite(
                |y| y.powi(n as i32 + 1) * sqrt_one_minus_sq(x * y),
                0.0,
                1.0,
                &inner,
                Endpoint::SqrtSingularRight,
            )
            .map(|q| q.value);
            x * x * failure.capture(y_integral)
        },
        0.0,
        FRAC_PI_2,
        spec,
        Endpoint::Smooth,
    );
    Ok(failure.finish(outer)?.value)
}

/// Coefficient of β*^{2m} inside the brackets of
/// ε = −(ħcπ/a³)[ζ(3)/16π² − 9ζ(5)β*²/128π⁴ − 225ζ(7)β*⁴/2048π⁶ − …].
pub fn small_coefficient(m: u32) -> Result<f64> {
    let zeta_part = |m: u32| -> Result<f64> {
        // Γ(2m+3) ζ(2m+3) / (2π)^{2m+3}
        let ratio: f64 = (1..=2 * m + 2).map(|k| k as f64 / (2.0 * PI)).product();
        Ok(ratio / (2.0 * PI) * zeta(2 * m as i32 + 3)?)
    };
    if m == 0 {
        return Ok(zeta(3)? / (16.0 * PI * PI));
    }
    let mi = m as i32;
    let factorial: f64 = (1..=m).map(f64::from).product();
    let gammas =
        gamma_half(3)? * gamma_half(2 * mi - 1)? * gamma_half(1)? * gamma_half(2 * mi + 3)?;
    Ok(-gammas / (2.0 * PI * gamma_half(2 * mi + 4)? * factorial) * zeta_part(m)?)
}

/// Small-β* series; the error estimate adds e^{−1/β*} for the dropped upper-limit part.
pub fn eps2d_series_small(beta_star: BetaStar, order: u32) -> Result<EnergyResult> {
    let b = beta_star.value();
    check_small_window(b, order)?;
    let norm = normalizer();
    let s = small_series(|m| Ok(norm * small_coefficient(m)?), b, order)?;
    let exponential = if b == 0.0 { 0.0 } else { (-1.0 / b).exp() };
    Ok(result(
        beta_star,
        Method::SeriesSmallBeta,
        -s.value,
        s.first_omitted + s.rounding + exponential,
        Some(s.order),
    ))
}

/// Bₙ (2π)ⁿ / n!, the weight of J(n) in the large-β* bracket.
fn bernoulli_weight(n: u32) -> Result<f64> {
    let scale: f64 = (1..=n).map(|k| 2.0 * PI / k as f64).product();
    Ok(bernoulli(n as usize)? * scale)
}

/// Coefficient of β*^{−n} inside the brackets of
/// ε = −(ħc/2a³β*²)[⅓(π/2 − ⅔) − (G/4 − 1/24)π/β* + 2π²/45β*² + …].
pub fn large_coefficient(n: u32, spec: &QuadratureSpec) -> Result<f64> {
    let w = bernoulli_weight(n)?;
    if w == 0.0 {
        return Ok(0.0);
    }
    Ok(w * coefficient_j(n, spec)?)
}

/// Large-β* series with the bracket summed through β*^{−order}; J(n ≥ 3) by quadrature.
pub fn eps2d_series_large(beta_star: BetaStar, order: u32) -> Result<EnergyResult> {
    let b = beta_star.value();
    check_large_window(Method::SeriesLargeBeta, b)?;
    if order > MAX_LARGE_ORDER {
        return Err(Error::Domain {
            what: "large-beta* series order",
            value: order as f64,
        });
    }
    let spec = QuadratureSpec::default();
    let inv = 1.0 / b;
    let terms = (0..=order)
        .map(|n| Ok(large_coefficient(n, &spec)? * inv.powi(n as i32)))
        .collect::<Result<Vec<f64>>>()?;
    let bracket: f64 = terms.iter().rev().sum();
    let next = if order == 0 {
        1
    } else {
        order + 1 + (order + 1) % 2
    };
    // J(n) ≤ F(0)/(n+2) = π/(4(n+2))
    let omitted = (bernoulli_weight(next)? * inv.powi(next as i32)).abs() * PI
        / (4.0 * (next as f64 + 2.0))
        / (1.0 - inv * inv)
        + spec.rel_tol * terms.iter().map(|t| t.abs()).sum::<f64>();
    let prefactor = 0.5 * normalizer() / (PI * b * b);
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
        (0.2, -0.996_042_037_284_755_001),
        (1.0, -0.873_257_152_975_206_145),
        (5.0, -0.168_054_794_812_014_042),
        (10.0, -0.051_621_188_598_622_384),
        (1000.0, -6.288_919_738_323_188e-6),
    ];

    const J_ORACLE: [f64; 7] = [
        0.301_376_553_376_076_651,
        0.187_324_731_877_638_087,
        0.133_333_333_333_333_333,
        0.102_386_738_524_965_077,
        0.082_539_682_539_682_540,
        0.068_827_117_016_910_713,
        0.058_835_978_835_978_836,
    ];

    #[test]
    fn bracket_limits_and_routes() {
        assert!((elliptic_bracket(0.0).unwrap() - PI / 4.0).abs() < 1e-16);
        assert!((elliptic_bracket(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert!(elliptic_bracket(1.1).is_err());
        let spec = QuadratureSpec::with_rel_tol(1e-13).unwrap();
        assert!((elliptic_bracket_by_quadrature(0.0, &spec).unwrap() - PI / 4.0).abs() < 1e-13);
        for k in [
            1e-5,
            0.1,
            0.24,
            0.25,
            0.5,
            0.9,
            0.999,
            1.0 - 1e-9,
            1.0 - 1e-13,
        ] {
            let a = elliptic_bracket(k).unwrap();
            let q = elliptic_bracket_by_quadrature(k, &spec).unwrap();
            assert!((a - q).abs() < 1e-12, "k = {k}: {a} vs {q}");
        }
    }

    #[test]
    fn integral_matches_reference_values() {
        let spec = QuadratureSpec::default();
        for (b, expected) in ORACLE {
            let r = eps2d_integral(beta(b), &spec).unwrap();
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
            let r = eps2d_double_integral(beta(*b), &spec).unwrap();
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
        assert!((eps2d_integral(beta(1e-4), &spec).unwrap().eps_star + 1.0).abs() < 1e-5);
        assert!((eps2d_double_integral(beta(1e-4), &spec).unwrap().eps_star + 1.0).abs() < 1e-5);
    }

    #[test]
    fn j_values() {
        let spec = QuadratureSpec::with_rel_tol(1e-13).unwrap();
        for (n, expected) in J_ORACLE.iter().enumerate() {
            let closed = coefficient_j(n as u32, &spec).unwrap();
            assert!((closed - expected).abs() < 1e-12, "J({n}) = {closed}");
            let quad = coefficient_j_by_quadrature(n as u32, &spec).unwrap();
            assert!(
                (quad - expected).abs() < 1e-12,
                "J({n}) by quadrature = {quad}"
            );
        }
    }

    #[test]
    fn small_coefficients_printed() {
        let z = |s| zeta(s).unwrap();
        let printed = [
            z(3) / (16.0 * PI.powi(2)),
            -9.0 * z(5) / (128.0 * PI.powi(4)),
            -225.0 * z(7) / (2048.0 * PI.powi(6)),
        ];
        for (m, p) in printed.iter().enumerate() {
            let g = small_coefficient(m as u32).unwrap();
            assert!(((g - p) / p).abs() <= 1e-14, "m = {m}: {g} vs {p}");
        }
        assert_eq!(
            eps2d_series_small(BetaStar::zero(), 16).unwrap().eps_star,
            -1.0
        );
    }

    #[test]
    fn large_coefficients_printed() {
        let spec = QuadratureSpec::default();
        let printed = [
            (PI / 2.0 - 2.0 / 3.0) / 3.0,
            -(catalan() / 4.0 - 1.0 / 24.0) * PI,
            2.0 * PI * PI / 45.0,
        ];
        for (n, p) in printed.iter().enumerate() {
            let g = large_coefficient(n as u32, &spec).unwrap();
            assert!(((g - p) / p).abs() <= 1e-14, "n = {n}: {g} vs {p}");
        }
        assert_eq!(large_coefficient(3, &spec).unwrap(), 0.0);
    }

    #[test]
    fn series_against_integral() {
        let spec = QuadratureSpec::default();
        let small = eps2d_series_small(beta(0.2), 16).unwrap();
        assert!((small.eps_star - ORACLE[0].1).abs() <= 3.0 * small.error_estimate);
        let large = eps2d_series_large(beta(10.0), 4).unwrap();
        let integral = eps2d_integral(beta(10.0), &spec).unwrap();
        assert!(((large.eps_star - integral.eps_star) / integral.eps_star).abs() <= 1e-3);
        assert!((large.eps_star - integral.eps_star).abs() <= large.error_estimate);
        assert!(eps2d_series_large(beta(1.0), 4).is_err());
        assert!(eps2d_series_small(beta(2.0), 4).is_err());
    }
}
