//! Special functions and constants consumed by the energy formulas.
//!
//! Bernoulli numbers use the convention B₁ = −1/2, i.e. the generating function
//!
//! ```text
//! ν / (e^ν − 1) = Σ Bₙ νⁿ / n!
//! ```
//!
//! Every series in [`crate::energy`] expands `1/(e^ν − 1)` with this convention;
//! swapping to B₁ = +1/2 would silently flip the sign of the odd-order terms.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest index held in the Bernoulli table.
pub const BERNOULLI_MAX: usize = 64;

/// Catalan's constant G = Σ (−1)ⁿ/(2n+1)².
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

/// Moduli at or above `1 − K_MODULUS_GUARD` are rejected by [`elliptic_k`].
pub const K_MODULUS_GUARD: f64 = 1e-12;

/// Starting index of the Euler–Maclaurin tail in [`zeta_by_summation`].
const ZETA_DIRECT_TERMS: u32 = 16;

struct BernoulliTable {
    exact: Vec<BigRational>,
    float: Vec<f64>,
}

fn table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0 for m ≥ 1
        let mut exact: Vec<BigRational> = Vec::with_capacity(BERNOULLI_MAX + 1);
        exact.push(BigRational::from_integer(BigInt::from(1)));
        for m in 1..=BERNOULLI_MAX {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::from(1);
            for (k, bk) in exact.iter().enumerate() {
                if !bk.is_zero() {
                    acc += bk * BigRational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let float = exact
            .iter()
            .map(|b| b.to_f64().expect("Bernoulli numbers up to B_64 fit in f64"))
            .collect();
        BernoulliTable { exact, float }
    })
}

/// Bernoulli number Bₙ (B₁ = −1/2) rounded to double precision.
pub fn bernoulli(n: usize) -> Result<f64> {
    table().float.get(n).copied().ok_or(Error::IndexOutOfRange {
        index: n,
        max: BERNOULLI_MAX,
    })
}

/// Bernoulli number Bₙ as an exact rational.
pub fn bernoulli_exact(n: usize) -> Result<BigRational> {
    table().exact.get(n).cloned().ok_or(Error::IndexOutOfRange {
        index: n,
        max: BERNOULLI_MAX,
    })
}

/// (2π)^m / m!, accumulated as a product to avoid overflow.
fn two_pi_pow_over_factorial(m: u32) -> f64 {
    (1..=m).fold(1.0, |acc, k| acc * (2.0 * PI) / k as f64)
}

/// Riemann ζ(s) at integer s ≥ 2.
///
/// Even arguments within the Bernoulli table use ζ(2n) = (−1)^{n+1} B₂ₙ (2π)^{2n} / (2·(2n)!);
/// everything else goes through [`zeta_by_summation`].
pub fn zeta(s: i32) -> Result<f64> {
    if s < 2 {
        return Err(Error::Domain {
            what: "zeta argument",
            value: s as f64,
        });
    }
    let s = s as u32;
    if s.is_multiple_of(2) && (s as usize) <= BERNOULLI_MAX {
        let n = s / 2;
        let b = bernoulli(s as usize)?;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        Ok(sign * b * two_pi_pow_over_factorial(s) / 2.0)
    } else {
        Ok(zeta_by_summation(s as f64))
    }
}

/// ζ(s) for real s > 1 by a short direct sum plus an Euler–Maclaurin tail.
pub fn zeta_by_summation(s: f64) -> f64 {
    assert!(s > 1.0, "zeta_by_summation requires s > 1");
    let head: f64 = (1..ZETA_DIRECT_TERMS)
        .rev()
        .map(|n| (n as f64).powf(-s))
        .sum();
    head + zeta_tail(s, ZETA_DIRECT_TERMS as f64)
}

/// Σ_{n ≥ m} n^{−s} for s > 1, m ≥ 1, by Euler–Maclaurin.
///
/// Accurate to double precision once m ≳ 10; callers with small m should sum the
/// head explicitly.
pub fn zeta_tail(s: f64, m: f64) -> f64 {
    assert!(s > 1.0 && m >= 1.0, "zeta_tail requires s > 1 and m >= 1");
    let lead = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s);
    let mut correction = 0.0;
    // rising factorial s(s+1)…(s+2k−2) times m^{−s−2k+1} / (2k)!
    let mut factor = s * m.powf(-s - 1.0) / 2.0;
    for k in 1..=20usize {
        let term = bernoulli(2 * k).expect("index within table") * factor;
        correction += term;
        if term.abs() <= 1e-18 * lead.abs() {
            break;
        }
        let kf = k as f64;
        factor *=
            (s + 2.0 * kf - 1.0) * (s + 2.0 * kf) / (m * m) / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
    }
    lead + correction
}

/// Γ(x) at x = twice_x / 2 for twice_x ≥ 1, from Γ(1) = 1 and Γ(1/2) = √π.
pub fn gamma_half(twice_x: i32) -> Result<f64> {
    if twice_x <= 0 {
        return Err(Error::Domain {
            what: "gamma_half argument (twice x)",
            value: twice_x as f64,
        });
    }
    let (mut value, mut x) = if twice_x % 2 == 0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    let target = twice_x as f64 / 2.0;
    while x < target {
        value *= x;
        x += 1.0;
    }
    Ok(value)
}

/// Generalised binomial coefficient C(1/2, j).
pub fn binomial_half(j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (0.5 - i as f64) / (i as f64 + 1.0))
}

struct Agm {
    mean: f64,
    /// Σ 2^{n−1} cₙ² with c₀ = k
    weighted_sum: f64,
}

fn agm(k: f64) -> Agm {
    let mut a = 1.0;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    let mut c = k;
    let mut pow2 = 0.5;
    let mut weighted_sum = pow2 * c * c;
    for _ in 0..64 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        c = 0.5 * (a - b);
        let next_b = (a * b).sqrt();
        a = 0.5 * (a + b);
        b = next_b;
        pow2 *= 2.0;
        weighted_sum += pow2 * c * c;
    }
    Agm {
        mean: a,
        weighted_sum,
    }
}

/// Complete elliptic integral of the first kind K(k), modulus convention
/// K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ).
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0 - K_MODULUS_GUARD).contains(&k) {
        return Err(Error::Domain {
            what: "elliptic K modulus",
            value: k,
        });
    }
    Ok(PI / (2.0 * agm(k).mean))
}

/// Complete elliptic integral of the second kind E(k), modulus convention
/// E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ, defined on 0 ≤ k ≤ 1.
pub fn elliptic_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain {
            what: "elliptic E modulus",
            value: k,
        });
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let r = agm(k);
    Ok(PI / (2.0 * r.mean) * (1.0 - r.weighted_sum))
}

pub fn catalan() -> f64 {
    CATALAN
}
