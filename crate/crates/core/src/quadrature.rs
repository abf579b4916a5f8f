//! Adaptive Gauss–Kronrod (7/15) integration.
//!
//! Square-root endpoint singularities are removed before refinement with the
//! substitution x = a + (b − a) sin θ (or its mirror for the left endpoint), which
//! maps √(b − x), √(1 − u²) and 1/√(1 − u²) behaviour onto analytic integrands in θ.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

/// Hard cap on live subintervals, independent of the depth limit.
const MAX_SEGMENTS: usize = 4096;
/// Hard cap on the number of decay-scale segments of a semi-infinite integral.
const MAX_TAIL_SEGMENTS: usize = 100_000;
/// Consecutive non-decreasing segments tolerated before giving up on decay.
const MAX_GROWTH_RUN: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("quadrature did not converge: value {value:e}, error estimate {error_estimate:e}, tolerance {tolerance:e}")]
    ConvergenceFailure {
        value: f64,
        error_estimate: f64,
        tolerance: f64,
    },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteEvaluation { x: f64 },
}

/// Requested accuracy of one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_subdivisions: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_subdivisions: 60,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: u32) -> Result<Self, QuadratureError> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rel_tol(rel_tol: f64) -> Result<Self, QuadratureError> {
        Self::new(0.0, rel_tol, Self::default().max_subdivisions)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadratureError::InvalidSpec(
                "abs_tol must be finite and >= 0",
            ));
        }
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return Err(QuadratureError::InvalidSpec(
                "rel_tol must be finite and >= 0",
            ));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(QuadratureError::InvalidSpec(
                "at least one of abs_tol, rel_tol must be positive",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadratureError::InvalidSpec(
                "max_subdivisions must be positive",
            ));
        }
        Ok(())
    }

    /// Acceptable absolute error for an integral of the given value.
    pub fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Behaviour of the integrand at the ends of a finite interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    Smooth,
    SqrtSingularLeft,
    SqrtSingularRight,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // largest error first; ties broken by position
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One G7/K15 panel. `eval` maps a node to (integrand value, original-coordinate x).
fn kronrod15<F>(eval: &F, a: f64, b: f64, depth: u32) -> Result<Segment, QuadratureError>
where
    F: Fn(f64) -> (f64, f64),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let checked = |u: f64| -> Result<f64, QuadratureError> {
        let (v, x) = eval(u);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFiniteEvaluation { x })
        }
    };

    let mut fv = [0.0f64; 15];
    fv[7] = checked(center)?;
    for j in 0..7 {
        fv[j] = checked(center - half * XGK[j])?;
        fv[14 - j] = checked(center + half * XGK[j])?;
    }

    let mut kronrod = WGK[7] * fv[7];
    let mut gauss = WG[3] * fv[7];
    let mut abs_sum = WGK[7] * fv[7].abs();
    for j in 0..7 {
        let pair = fv[j] + fv[14 - j];
        kronrod += WGK[j] * pair;
        abs_sum += WGK[j] * (fv[j].abs() + fv[14 - j].abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fv[7] - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        depth,
    })
}

pub(crate) fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn adaptive<F>(
    eval: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let first = kronrod15(&eval, lo, hi, 0)?;
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);

    loop {
        if error <= spec.tolerance(value) {
            // confirm with an ordered re-summation
            let mut all: Vec<Segment> = heap.iter().chain(frozen.iter()).copied().collect();
            all.sort_by(|x, y| x.a.total_cmp(&y.a));
            let total = neumaier_sum(all.iter().map(|s| s.value));
            let total_err = neumaier_sum(all.iter().map(|s| s.error));
            if total_err <= spec.tolerance(total) {
                return Ok(QuadratureResult {
                    value: total,
                    error_estimate: total_err,
                    evaluations,
                });
            }
            value = total;
            error = total_err;
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        if worst.depth >= spec.max_subdivisions {
            frozen.push(worst);
            continue;
        }
        if heap.len() + frozen.len() + 2 > MAX_SEGMENTS {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod15(&eval, worst.a, mid, worst.depth + 1)?;
        let right = kronrod15(&eval, mid, worst.b, worst.depth + 1)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    let all: Vec<Segment> = heap.into_iter().chain(frozen).collect();
    let value = neumaier_sum(all.iter().map(|s| s.value));
    let error_estimate = neumaier_sum(all.iter().map(|s| s.error));
    Err(QuadratureError::ConvergenceFailure {
        value,
        error_estimate,
        tolerance: spec.tolerance(value),
    })
}

/// ∫ₐᵇ f(x) dx to the tolerance in `spec`.
///
/// `endpoint` flags a √-type singularity of `f` at one end; the integrand must
/// still be finite on the open interval.
pub fn integrate_finite<F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    endpoint: Endpoint,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    let width = b - a;
    match endpoint {
        Endpoint::Smooth => adaptive(|x| (f(x), x), a, b, spec),
        Endpoint::SqrtSingularRight => adaptive(
            |theta: f64| {
                let x = (a + width * theta.sin()).min(b);
                (f(x) * width * theta.cos(), x)
            },
            0.0,
            FRAC_PI_2,
            spec,
        ),
        Endpoint::SqrtSingularLeft => adaptive(
            |theta: f64| {
                let x = (b - width * theta.sin()).max(a);
                (f(x) * width * theta.cos(), x)
            },
            0.0,
            FRAC_PI_2,
            spec,
        ),
    }
}

/// ∫ₐ^∞ f(x) dx for an integrand decaying roughly like e^{−x/decay_scale}.
///
/// The half-line is cut into segments of length `decay_scale`; integration stops
/// once a segment contributes less than a tenth of the tolerance, and the rest is
/// bounded by the geometric tail implied by the last two segments.
pub fn integrate_semi_infinite<F>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
    decay_scale: f64,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a.is_finite() && decay_scale.is_finite() && decay_scale > 0.0) {
        return Err(QuadratureError::InvalidInterval {
            a,
            b: f64::INFINITY,
        });
    }
    let mut values: Vec<f64> = Vec::new();
    let mut errors: Vec<f64> = Vec::new();
    let mut evaluations = 0;
    let mut growth_run = 0;
    let mut previous: Option<f64> = None;

    for k in 0..MAX_TAIL_SEGMENTS {
        let lo = a + k as f64 * decay_scale;
        let hi = a + (k + 1) as f64 * decay_scale;
        let seg = integrate_finite(&f, lo, hi, spec, Endpoint::Smooth)?;
        evaluations += seg.evaluations;
        values.push(seg.value);
        errors.push(seg.error_estimate);

        let total = neumaier_sum(values.iter().copied());
        let tol = spec.tolerance(total);
        let current = seg.value.abs();
        if let Some(prev) = previous {
            let ratio = if current == 0.0 { 0.0 } else { current / prev };
            if ratio < 1.0 {
                growth_run = 0;
                if current < 0.1 * tol {
                    let tail = current * ratio / (1.0 - ratio);
                    let err = neumaier_sum(errors.iter().copied()) + tail;
                    if err <= tol {
                        return Ok(QuadratureResult {
                            value: total,
                            error_estimate: err,
                            evaluations,
                        });
                    }
                }
            } else {
                growth_run += 1;
                if growth_run > MAX_GROWTH_RUN {
                    break;
                }
            }
        }
        previous = Some(current);
    }
    let value = neumaier_sum(values.iter().copied());
    Err(QuadratureError::ConvergenceFailure {
        value,
        error_estimate: f64::INFINITY,
        tolerance: spec.tolerance(value),
    })
}
