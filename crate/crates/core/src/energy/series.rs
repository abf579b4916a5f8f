use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SeriesSum {
    pub value: f64,
    /// Highest power actually summed.
    pub order: u32,
    /// Magnitude of the first term left out.
    pub first_omitted: f64,
    /// Floating-point error of the summation.
    pub rounding: f64,
}

/// Σ_j a_j β^{2j} for 2j ≤ max_order, stopping early at the smallest term.
///
/// Terms from j = 2 on are kept only while their magnitude does not grow; the
/// first growing term is reported as the omitted one.
pub(crate) fn small_series<F>(coefficient: F, beta: f64, max_order: u32) -> Result<SeriesSum>
where
    F: Fn(u32) -> Result<f64>,
{
    let x = beta * beta;
    let max_j = max_order / 2;
    let mut terms = vec![coefficient(0)?];
    let mut omitted = None;
    for j in 1..=max_j {
        let t = coefficient(j)? * x.powi(j as i32);
        if j >= 2 && t.abs() > terms[j as usize - 1].abs() {
            omitted = Some(t.abs());
            break;
        }
        terms.push(t);
    }
    let used = terms.len() as u32 - 1;
    let first_omitted = match omitted {
        Some(t) => t,
        None => (coefficient(used + 1)? * x.powi(used as i32 + 1)).abs(),
    };
    Ok(SeriesSum {
        value: terms.iter().rev().sum(),
        order: 2 * used,
        first_omitted,
        rounding: 2.0 * f64::EPSILON * terms.iter().map(|t| t.abs()).sum::<f64>(),
    })
}

/// Bound on c∫_{1/β}^∞ t^p/(e^{2πt} − 1) dt, the part of the integrand the
/// term-by-term expansion carries past the upper limit t = 1/β.
pub(crate) fn upper_limit_remainder(beta: f64, c: f64, p: i32) -> f64 {
    if beta == 0.0 {
        return 0.0;
    }
    let x = 1.0 / beta;
    let two_pi_x = 2.0 * std::f64::consts::PI * x;
    let geometric = 1.0 / (1.0 - (p as f64 / two_pi_x).min(0.9));
    c * x.powi(p) * (-two_pi_x).exp() / (2.0 * std::f64::consts::PI) * geometric
        / (-(-two_pi_x).exp_m1())
}
