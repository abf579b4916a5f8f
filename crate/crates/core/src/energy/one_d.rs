//! Scalar field on a segment of length a.
//!
//! ε* = ε / (ħcπ/24a²). Representations: the regularised integral over the
//! branch-cut segment [0, 1/β*], the convergent mode sum, and the two asymptotic
//! expansions.

use std::f64::consts::PI;

use super::series::{small_series, upper_limit_remainder};
use super::{
    check_large_window, check_small_window, eps_undeformed, planck, sqrt_one_minus_sq, BetaStar,
    Dimension, EnergyResult, Method,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, neumaier_sum, Endpoint, QuadratureSpec};
use crate::specialfn::{bernoulli, binomial_half, gamma_half, zeta, zeta_tail};

/// Highest inverse power of β* available to [`eps1d_series_large`].
pub const MAX_LARGE_ORDER: u32 = 63;
/// The mode sum refuses smaller β*; below it the bracket cancels to fewer digits than requested.
pub const MODE_SUM_MIN_BETA: f64 = 1e-3;
/// Modes summed explicitly before switching to the asymptotic tail.
const MODE_SUM_DIRECT_TERMS: f64 = 1e4;
const MAX_TAIL_EXPANSION: u32 = 40;

fn result(
    beta_star: BetaStar,
    method: Method,
    eps_star: f64,
    error_estimate: f64,
    order: Option<u32>,
) -> EnergyResult {
    EnergyResult {
        dimension: Dimension::D1,
        beta_star,
        method,
        eps_star,
        error_estimate,
        order,
    }
}

/// ε* = −24 ∫₀^{1/β*} t √(1 − (β*t)²) / (e^{2πt} − 1) dt.
pub fn eps1d_integral(beta_star: BetaStar, spec: &QuadratureSpec) -> Result<EnergyResult> {
    if beta_star.is_zero() {
        return Ok(eps_undeformed(Dimension::D1));
    }
    let b = beta_star.value();
    let q = integrate_finite(
        |t| planck(t) * sqrt_one_minus_sq(b * t),
        0.0,
        1.0 / b,
        spec,
        Endpoint::SqrtSingularRight,
    )?;
    Ok(result(
        beta_star,
        Method::Integral,
        -24.0 * q.value,
        24.0 * q.error_estimate,
        None,
    ))
}

/// ε* = −(12/β*) [ ½ Σₙ (√(1 + (β*n)²) + β*n)^{−2} + ¼ − 1/(3β*) ].
///
/// The first 10⁴ modes (or 10/β*, whichever is larger) are summed directly. Beyond
/// that each term is expanded in powers of 1/(β*n)² and every power is summed in
/// closed form with an Euler–Maclaurin tail, adding powers until the truncation is
/// negligible. `rel_tol` bounds the relative error of the returned ε*.
pub fn eps1d_mode_sum(beta_star: BetaStar, rel_tol: f64) -> Result<EnergyResult> {
    if beta_star.is_zero() {
        return Ok(eps_undeformed(Dimension::D1));
    }
    let b = beta_star.value();
    if b < MODE_SUM_MIN_BETA {
        return Err(Error::OutsideValidity {
            method: Method::ModeSum,
            beta_star: b,
            reason: "mode sum needs beta* >= 1e-3",
        });
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::Domain {
            what: "mode-sum tolerance",
            value: rel_tol,
        });
    }
    let cutoff = MODE_SUM_DIRECT_TERMS.max((10.0 / b).ceil());
    let direct = neumaier_sum((1..=cutoff as u64).rev().map(|n| {
        let y = b * n as f64;
        let s = y + y.hypot(1.0);
        1.0 / (s * s)
    }));

    // 1/s² = Σ_{j≥1} c_j y^{−2j} with c_j = −2·C(1/2, j+1)
    let start = cutoff + 1.0;
    let inv_b2 = 1.0 / (b * b);
    let mut tail_terms = Vec::new();
    let mut truncation = f64::INFINITY;
    for j in 1..=MAX_TAIL_EXPANSION {
        let term =
            -2.0 * binomial_half(j + 1) * inv_b2.powi(j as i32) * zeta_tail(2.0 * j as f64, start);
        if term.abs() <= 1e-17 * direct {
            truncation = term.abs();
            break;
        }
        tail_terms.push(term);
    }
    let tail: f64 = tail_terms.iter().rev().sum();
    let sum = direct + tail;

    let bracket = 0.5 * sum + 0.25 - 1.0 / (3.0 * b);
    let eps_star = -12.0 / b * bracket;
    let rounding = 2.0 * f64::EPSILON * (0.5 * sum + 0.25 + 1.0 / (3.0 * b));
    let error_estimate = 12.0 / b * (0.5 * truncation + rounding);
    if error_estimate > rel_tol * eps_star.abs() {
        return Err(Error::TailCorrection {
            tolerance: rel_tol,
            achievable: error_estimate / eps_star.abs(),
        });
    }
    Ok(result(
        beta_star,
        Method::ModeSum,
        eps_star,
        error_estimate,
        None,
    ))
}

/// Coefficient a_j of β*^{2j} in ε* = −(1 − β*²/20 − β*⁴/168 − …).
///
/// a_j = 12 (−1)^{j+1} Γ(j − 1/2) B_{2j+2} / ((j+1)! 4√π) for j ≥ 1, a₀ = 1.
pub fn small_coefficient(j: u32) -> Result<f64> {
    if j == 0 {
        return Ok(1.0);
    }
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    let factorial: f64 = (1..=j + 1).map(f64::from).product();
    Ok(
        12.0 * sign * gamma_half(2 * j as i32 - 1)? * bernoulli(2 * j as usize + 2)?
            / (factorial * 4.0 * PI.sqrt()),
    )
}

/// Coefficient b_p of β*^{−p} in ε* = −(3/β* − 4/β*² + π²/4β*³ − …).
pub fn large_coefficient(p: u32) -> Result<f64> {
    Ok(match p {
        0 => 0.0,
        1 => 3.0,
        2 => -4.0,
        p if p % 2 == 0 => 0.0,
        p => {
            let n = (p - 1) / 2;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let factorial: f64 = (1..=n + 1).map(f64::from).product();
            -12.0 * sign * gamma_half(2 * n as i32 + 1)? * zeta(2 * n as i32)?
                / (factorial * 2.0 * PI.sqrt())
        }
    })
}

/// Small-β* asymptotic series through β*^{order}, truncated at its smallest term.
pub fn eps1d_series_small(beta_star: BetaStar, order: u32) -> Result<EnergyResult> {
    let b = beta_star.value();
    check_small_window(b, order)?;
    let s = small_series(small_coefficient, b, order)?;
    Ok(result(
        beta_star,
        Method::SeriesSmallBeta,
        -s.value,
        s.first_omitted + s.rounding + upper_limit_remainder(b, 24.0, 2),
        Some(s.order),
    ))
}

/// Large-β* series through β*^{−order}; convergent for β* > 1.
pub fn eps1d_series_large(beta_star: BetaStar, order: u32) -> Result<EnergyResult> {
    let b = beta_star.value();
    check_large_window(Method::SeriesLargeBeta, b)?;
    if !(1..=MAX_LARGE_ORDER).contains(&order) {
        return Err(Error::Domain {
            what: "large-beta* series order",
            value: order as f64,
        });
    }
    let inv = 1.0 / b;
    let terms = (1..=order)
        .map(|p| Ok(large_coefficient(p)? * inv.powi(p as i32)))
        .collect::<Result<Vec<f64>>>()?;
    let value: f64 = terms.iter().rev().sum();
    let next = if order < 2 {
        order + 1
    } else {
        order + 1 + order % 2
    };
    // remaining odd terms shrink at least geometrically, by 1/β*² per step
    let tail = (large_coefficient(next)? * inv.powi(next as i32)).abs() / (1.0 - inv * inv);
    let rounding = 2.0 * f64::EPSILON * terms.iter().map(|t| t.abs()).sum::<f64>();
    Ok(result(
        beta_star,
        Method::SeriesLargeBeta,
        -value,
        tail + rounding,
        Some(order),
    ))
}
