//! Casimir energy of the deformed field in one, two and three dimensions.
//!
//! Everything is computed in a dimensionless core: the only physics input is
//! β* = βħcπ/(2a) and the output is ε* = ε / |ε_undeformed|, so ε*(0) = −1 and
//! ε* → 0⁻ as β* → ∞. Physical units enter only through [`PhysicalSetup`].

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureError, QuadratureSpec};
use crate::specialfn::zeta;

pub mod one_d;
mod series;
pub mod three_d;
pub mod two_d;

pub use one_d::{eps1d_integral, eps1d_mode_sum, eps1d_series_large, eps1d_series_small};
pub use three_d::{
    coefficient_i, eps3d_double_integral, eps3d_integral, eps3d_series_large, eps3d_series_small,
};
pub use two_d::{
    coefficient_j, eps2d_double_integral, eps2d_integral, eps2d_series_large, eps2d_series_small,
};

/// Small-β* series refuse β* above this value.
pub const SMALL_SERIES_MAX_BETA: f64 = 1.5;
/// Large-β* series require β* strictly above this value.
pub const LARGE_SERIES_MIN_BETA: f64 = 1.0;
/// Highest power of β* a small-β* series may be asked for.
pub const MAX_SMALL_ORDER: u32 = 16;

/// Dimensionless deformation parameter β* = βħcπ/(2a).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BetaStar(f64);

impl BetaStar {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(BetaStar(value))
        } else {
            Err(Error::Domain {
                what: "beta*",
                value,
            })
        }
    }

    pub const fn zero() -> Self {
        BetaStar(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    D1,
    D2,
    D3,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::D1, Dimension::D2, Dimension::D3];

    pub fn as_u8(self) -> u8 {
        match self {
            Dimension::D1 => 1,
            Dimension::D2 => 2,
            Dimension::D3 => 3,
        }
    }

    pub fn from_u8(d: u8) -> Option<Self> {
        match d {
            1 => Some(Dimension::D1),
            2 => Some(Dimension::D2),
            3 => Some(Dimension::D3),
            _ => None,
        }
    }

    /// Methods that exist for this dimension at some β* > 0, in canonical order.
    pub fn methods(self) -> &'static [Method] {
        match self {
            Dimension::D1 => &[
                Method::Integral,
                Method::ModeSum,
                Method::SeriesSmallBeta,
                Method::SeriesLargeBeta,
            ],
            Dimension::D2 | Dimension::D3 => &[
                Method::Integral,
                Method::DoubleIntegral,
                Method::SeriesSmallBeta,
                Method::SeriesLargeBeta,
            ],
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Which representation of the energy produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Integral,
    DoubleIntegral,
    ModeSum,
    SeriesSmallBeta,
    SeriesLargeBeta,
    ClosedFormUndeformed,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Integral,
        Method::DoubleIntegral,
        Method::ModeSum,
        Method::SeriesSmallBeta,
        Method::SeriesLargeBeta,
        Method::ClosedFormUndeformed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Integral => "integral",
            Method::DoubleIntegral => "double-integral",
            Method::ModeSum => "mode-sum",
            Method::SeriesSmallBeta => "series-small",
            Method::SeriesLargeBeta => "series-large",
            Method::ClosedFormUndeformed => "closed-form",
        }
    }

    pub fn is_series(self) -> bool {
        matches!(self, Method::SeriesSmallBeta | Method::SeriesLargeBeta)
    }

    pub fn available_for(self, dimension: Dimension) -> bool {
        match self {
            Method::ModeSum => dimension == Dimension::D1,
            Method::DoubleIntegral => dimension != Dimension::D1,
            _ => true,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}'"))
    }
}

/// One computed normalized Casimir energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub dimension: Dimension,
    pub beta_star: BetaStar,
    pub method: Method,
    pub eps_star: f64,
    pub error_estimate: f64,
    /// Highest power of β* (small series) or 1/β* (large series) actually summed.
    pub order: Option<u32>,
}

/// Deformation parameter, length and ħc in one consistent unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSetup {
    pub beta: f64,
    pub a: f64,
    pub hbar_c: f64,
}

impl PhysicalSetup {
    pub fn new(beta: f64, a: f64, hbar_c: f64) -> Result<Self> {
        let setup = PhysicalSetup { beta, a, hbar_c };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::Domain {
                what: "beta",
                value: self.beta,
            });
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::Domain {
                what: "a",
                value: self.a,
            });
        }
        if !(self.hbar_c.is_finite() && self.hbar_c > 0.0) {
            return Err(Error::Domain {
                what: "hbar_c",
                value: self.hbar_c,
            });
        }
        Ok(())
    }
}

/// Per-mode vacuum energy in units of ħω, with x = βħω/2.
pub fn vacuum_mode_energy(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain {
            what: "x = beta*hbar*omega/2",
            value: x,
        });
    }
    Ok(0.5 * (x.hypot(1.0) + x))
}

/// Level N of one deformed oscillator mode in units of ħω, with x = βħω/2.
pub fn oscillator_level(n: u64, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain {
            what: "x = beta*hbar*omega/2",
            value: x,
        });
    }
    let n = n as f64;
    Ok((n + 0.5) * x.hypot(1.0) + x * (n * n + n + 0.5))
}

pub fn eps_undeformed(dimension: Dimension) -> EnergyResult {
    EnergyResult {
        dimension,
        beta_star: BetaStar::zero(),
        method: Method::ClosedFormUndeformed,
        eps_star: -1.0,
        error_estimate: 0.0,
        order: None,
    }
}

pub fn beta_star_from_physical(setup: &PhysicalSetup) -> Result<BetaStar> {
    setup.validate()?;
    BetaStar::new(setup.beta * setup.hbar_c * PI / (2.0 * setup.a))
}

/// Magnitude of the undeformed Casimir energy density: ħcπ/(24a²), ħcζ(3)/(16πa³), ħcπ²/(720a⁴).
pub fn undeformed_magnitude(dimension: Dimension, setup: &PhysicalSetup) -> Result<f64> {
    setup.validate()?;
    let (hc, a) = (setup.hbar_c, setup.a);
    Ok(match dimension {
        Dimension::D1 => hc * PI / (24.0 * a * a),
        Dimension::D2 => hc * zeta(3)? / (16.0 * PI * a.powi(3)),
        Dimension::D3 => hc * PI * PI / (720.0 * a.powi(4)),
    })
}

/// Energy density in the units of `setup`.
pub fn eps_physical(result: &EnergyResult, setup: &PhysicalSetup) -> Result<f64> {
    Ok(result.eps_star * undeformed_magnitude(result.dimension, setup)?)
}

/// Series orders used when the caller does not choose one.
pub fn default_order(dimension: Dimension, method: Method) -> u32 {
    match (dimension, method) {
        (_, Method::SeriesSmallBeta) => MAX_SMALL_ORDER,
        (Dimension::D1, Method::SeriesLargeBeta) => one_d::MAX_LARGE_ORDER,
        (Dimension::D2, Method::SeriesLargeBeta) => two_d::DEFAULT_LARGE_ORDER,
        (Dimension::D3, Method::SeriesLargeBeta) => three_d::MAX_LARGE_ORDER,
        _ => 0,
    }
}

/// Evaluates one representation. β* = 0 always yields the undeformed closed form.
pub fn compute(
    dimension: Dimension,
    beta_star: BetaStar,
    method: Method,
    spec: &QuadratureSpec,
    order: Option<u32>,
) -> Result<EnergyResult> {
    if beta_star.is_zero() {
        return Ok(eps_undeformed(dimension));
    }
    if !method.available_for(dimension) {
        return Err(Error::MethodUnavailable { method, dimension });
    }
    let order = order.unwrap_or_else(|| default_order(dimension, method));
    match (dimension, method) {
        (_, Method::ClosedFormUndeformed) => Err(Error::OutsideValidity {
            method,
            beta_star: beta_star.value(),
            reason: "closed form holds only at beta* = 0",
        }),
        (Dimension::D1, Method::Integral) => eps1d_integral(beta_star, spec),
        (Dimension::D1, Method::ModeSum) => eps1d_mode_sum(beta_star, spec.rel_tol),
        (Dimension::D1, Method::SeriesSmallBeta) => eps1d_series_small(beta_star, order),
        (Dimension::D1, Method::SeriesLargeBeta) => eps1d_series_large(beta_star, order),
        (Dimension::D2, Method::Integral) => eps2d_integral(beta_star, spec),
        (Dimension::D2, Method::DoubleIntegral) => eps2d_double_integral(beta_star, spec),
        (Dimension::D2, Method::SeriesSmallBeta) => eps2d_series_small(beta_star, order),
        (Dimension::D2, Method::SeriesLargeBeta) => eps2d_series_large(beta_star, order),
        (Dimension::D3, Method::Integral) => eps3d_integral(beta_star, spec),
        (Dimension::D3, Method::DoubleIntegral) => eps3d_double_integral(beta_star, spec),
        (Dimension::D3, Method::SeriesSmallBeta) => eps3d_series_small(beta_star, order),
        (Dimension::D3, Method::SeriesLargeBeta) => eps3d_series_large(beta_star, order),
        (Dimension::D1, Method::DoubleIntegral) | (_, Method::ModeSum) => {
            Err(Error::MethodUnavailable { method, dimension })
        }
    }
}

/// t / (e^{2πt} − 1), with its t → 0 limit 1/(2π).
pub(crate) fn planck(t: f64) -> f64 {
    if t == 0.0 {
        1.0 / (2.0 * PI)
    } else {
        t / (2.0 * PI * t).exp_m1()
    }
}

/// √(1 − k²) without cancellation near k = 1; zero beyond.
pub(crate) fn sqrt_one_minus_sq(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).max(0.0).sqrt()
}

/// Tolerance for the inner integral of a nested quadrature.
pub(crate) fn inner_spec(outer: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 0.1 * outer.abs_tol,
        rel_tol: (0.1 * outer.rel_tol).max(2e-14),
        max_subdivisions: outer.max_subdivisions,
    }
}

/// Carries the first inner-integral failure out of an outer integrand closure.
#[derive(Default)]
pub(crate) struct InnerFailure(RefCell<Option<Error>>);

impl InnerFailure {
    pub fn capture(&self, r: std::result::Result<f64, QuadratureError>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e.into());
                f64::NAN
            }
        }
    }

    pub fn finish<T>(self, outer: std::result::Result<T, QuadratureError>) -> Result<T> {
        if let Some(e) = self.0.into_inner() {
            return Err(e);
        }
        Ok(outer?)
    }
}

pub(crate) fn check_large_window(method: Method, beta: f64) -> Result<()> {
    if beta > LARGE_SERIES_MIN_BETA {
        Ok(())
    } else {
        Err(Error::OutsideValidity {
            method,
            beta_star: beta,
            reason: "large-beta* series needs beta* > 1",
        })
    }
}

pub(crate) fn check_small_window(beta: f64, order: u32) -> Result<()> {
    if order > MAX_SMALL_ORDER {
        return Err(Error::Domain {
            what: "small-beta* series order",
            value: order as f64,
        });
    }
    if beta > SMALL_SERIES_MAX_BETA {
        return Err(Error::OutsideValidity {
            method: Method::SeriesSmallBeta,
            beta_star: beta,
            reason: "small-beta* series refuses beta* > 1.5",
        });
    }
    Ok(())
}
