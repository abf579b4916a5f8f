//! Cross-method agreement reports and the printed-coefficient audit.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use crate::energy::{compute, one_d, three_d, two_d, BetaStar, Dimension, EnergyResult, Method};
use crate::error::Error;
use crate::quadrature::QuadratureSpec;
use crate::specialfn::{catalan, zeta};

/// Header shared by sweep files and the entry block of a report.
pub const CSV_HEADER: &str = "dim,beta_star,method,eps_star,err_est";
/// Header of the pairwise block of a report.
pub const PAIR_CSV_HEADER: &str = "dim,beta_star,method_a,method_b,rel_dev,tolerance,pass";

/// One CSV line (without newline) in the [`CSV_HEADER`] schema.
pub fn csv_row(r: &EnergyResult) -> String {
    format!(
        "{},{:.16e},{},{:.16e},{:.16e}",
        r.dimension,
        r.beta_star.value(),
        r.method,
        r.eps_star,
        r.error_estimate
    )
}

/// Tolerances applied when comparing two methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceMatrix {
    /// Relative tolerance between two exact representations.
    pub exact: f64,
    /// A series passes if it is within this multiple of its own error estimate.
    pub series_factor: f64,
}

impl Default for ToleranceMatrix {
    fn default() -> Self {
        Self {
            exact: 1e-7,
            series_factor: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Computed(EnergyResult),
    /// Outside the method's validity window; never counts against the report.
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub method: Method,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    pub method_a: Method,
    pub method_b: Method,
    pub relative_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub dimension: Dimension,
    pub beta_star: BetaStar,
    pub entries: Vec<Entry>,
    pub pairwise: Vec<PairCheck>,
    pub overall_pass: bool,
}

/// [`cross_validate_with`] using the default tolerance matrix.
pub fn cross_validate(
    dimension: Dimension,
    beta_star: BetaStar,
    spec: &QuadratureSpec,
) -> ValidationReport {
    cross_validate_with(dimension, beta_star, spec, &ToleranceMatrix::default())
}

/// Evaluates every method of `dimension` at `beta_star` and compares each against the
/// integral representation.
pub fn cross_validate_with(
    dimension: Dimension,
    beta_star: BetaStar,
    spec: &QuadratureSpec,
    tolerances: &ToleranceMatrix,
) -> ValidationReport {
    if beta_star.is_zero() {
        let entry = Entry {
            method: Method::ClosedFormUndeformed,
            outcome: Outcome::Computed(crate::energy::eps_undeformed(dimension)),
        };
        return ValidationReport {
            dimension,
            beta_star,
            entries: vec![entry],
            pairwise: Vec::new(),
            overall_pass: true,
        };
    }

    let entries: Vec<Entry> = dimension
        .methods()
        .iter()
        .filter(|m| **m != Method::ClosedFormUndeformed)
        .map(|&method| {
            // the mode sum takes a plain tolerance; keep it well inside the comparison
            let method_spec = if method == Method::ModeSum {
                QuadratureSpec {
                    rel_tol: tolerances.exact / 10.0,
                    ..*spec
                }
            } else {
                *spec
            };
            let outcome = match compute(dimension, beta_star, method, &method_spec, None) {
                Ok(r) => Outcome::Computed(r),
                Err(e @ Error::OutsideValidity { .. }) => Outcome::Skipped(e.to_string()),
                Err(e) => Outcome::Failed(e.to_string()),
            };
            Entry { method, outcome }
        })
        .collect();

    let reference = entries.iter().find_map(|e| match &e.outcome {
        Outcome::Computed(r) if e.method == Method::Integral => Some(*r),
        _ => None,
    });

    let mut pairwise = Vec::new();
    if let Some(reference) = &reference {
        for entry in &entries {
            let Outcome::Computed(r) = &entry.outcome else {
                continue;
            };
            if entry.method == Method::Integral {
                continue;
            }
            let scale = reference.eps_star.abs();
            let relative_deviation = (r.eps_star - reference.eps_star).abs() / scale;
            let tolerance = if entry.method.is_series() {
                tolerances.series_factor * (r.error_estimate + reference.error_estimate) / scale
            } else {
                tolerances.exact
            };
            pairwise.push(PairCheck {
                method_a: Method::Integral,
                method_b: entry.method,
                relative_deviation,
                tolerance,
                pass: relative_deviation <= tolerance,
            });
        }
    }

    let overall_pass = reference.is_some()
        && entries
            .iter()
            .all(|e| !matches!(e.outcome, Outcome::Failed(_)))
        && pairwise.iter().all(|p| p.pass);

    ValidationReport {
        dimension,
        beta_star,
        entries,
        pairwise,
        overall_pass,
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

impl ValidationReport {
    /// Line-oriented human-readable form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "dimension {} beta* {:.16e}",
            self.dimension,
            self.beta_star.value()
        );
        for e in &self.entries {
            let _ = match &e.outcome {
                Outcome::Computed(r) => writeln!(
                    out,
                    "  {:<16} eps* = {:.16e}  err = {:.3e}",
                    e.method.name(),
                    r.eps_star,
                    r.error_estimate
                ),
                Outcome::Skipped(why) => writeln!(out, "  {:<16} skipped: {why}", e.method.name()),
                Outcome::Failed(why) => writeln!(out, "  {:<16} FAILED: {why}", e.method.name()),
            };
        }
        for p in &self.pairwise {
            let _ = writeln!(
                out,
                "  {} vs {}: rel dev {:.3e} tol {:.3e} {}",
                p.method_a,
                p.method_b,
                p.relative_deviation,
                p.tolerance,
                verdict(p.pass)
            );
        }
        let _ = writeln!(out, "overall {}", verdict(self.overall_pass));
        out
    }

    /// Entry rows in the sweep schema, a blank line, then the pairwise rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            if let Outcome::Computed(r) = &e.outcome {
                out.push_str(&csv_row(r));
                out.push('\n');
            }
        }
        out.push('\n');
        out.push_str(PAIR_CSV_HEADER);
        out.push('\n');
        for p in &self.pairwise {
            let _ = writeln!(
                out,
                "{},{:.16e},{},{},{:.16e},{:.16e},{}",
                self.dimension,
                self.beta_star.value(),
                p.method_a,
                p.method_b,
                p.relative_deviation,
                p.tolerance,
                p.pass
            );
        }
        out
    }
}

/// One printed series coefficient against its general-term generator.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub series: &'static str,
    /// Power of β* the coefficient multiplies (negative for large-β* series).
    pub power: i32,
    pub generated: f64,
    pub printed: f64,
    pub relative_deviation: f64,
    pub pass: bool,
}

pub const AUDIT_TOLERANCE: f64 = 1e-13;

fn audit_entry(
    series: &'static str,
    power: i32,
    generated: crate::error::Result<f64>,
    printed: f64,
) -> AuditEntry {
    let generated = generated.unwrap_or(f64::NAN);
    let relative_deviation = ((generated - printed) / printed).abs();
    AuditEntry {
        series,
        power,
        generated,
        printed,
        relative_deviation,
        pass: relative_deviation <= AUDIT_TOLERANCE,
    }
}

/// Every printed coefficient of the six series, regenerated from the general terms.
pub fn coefficient_audit() -> Vec<AuditEntry> {
    let z = |s: i32| zeta(s).unwrap_or(f64::NAN);
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();

    for (p, printed) in [
        (1, 3.0),
        (2, -4.0),
        (3, PI.powi(2) / 4.0),
        (5, -PI.powi(4) / 120.0),
        (7, PI.powi(6) / 2016.0),
    ] {
        out.push(audit_entry(
            "1d-large",
            -(p as i32),
            one_d::large_coefficient(p),
            printed,
        ));
    }
    for (j, printed) in [
        (0, 1.0),
        (1, -1.0 / 20.0),
        (2, -1.0 / 168.0),
        (3, -1.0 / 320.0),
        (4, -5.0 / 1408.0),
    ] {
        out.push(audit_entry(
            "1d-small",
            2 * j as i32,
            one_d::small_coefficient(j),
            printed,
        ));
    }
    for (p, printed) in [
        (0, 0.5 * (LN_2 - 0.25)),
        (1, -(PI / 2.0 - 16.0 / 15.0)),
        (2, PI.powi(2) / 24.0),
    ] {
        out.push(audit_entry(
            "3d-large",
            -(p as i32),
            three_d::large_coefficient(p),
            printed,
        ));
    }
    // the same bracket terms through the Bernoulli-weighted general sum
    for (p, printed) in [
        (0, 0.5 * (LN_2 - 0.25)),
        (1, -(PI / 2.0 - 16.0 / 15.0)),
        (2, PI.powi(2) / 24.0),
    ] {
        out.push(audit_entry(
            "3d-large-general-sum",
            -(p as i32),
            three_d::large_coefficient_from_bernoulli(p),
            printed,
        ));
    }
    for (k, printed) in [
        (0, 1.0),
        (1, -1.0 / 7.0),
        (2, -3.0 / 112.0),
        (3, -5.0 / 264.0),
    ] {
        out.push(audit_entry(
            "3d-small",
            2 * k as i32,
            three_d::small_coefficient(k),
            printed,
        ));
    }
    for (m, printed) in [
        (0, z(3) / (16.0 * PI.powi(2))),
        (1, -9.0 * z(5) / (128.0 * PI.powi(4))),
        (2, -225.0 * z(7) / (2048.0 * PI.powi(6))),
    ] {
        out.push(audit_entry(
            "2d-small",
            2 * m as i32,
            two_d::small_coefficient(m),
            printed,
        ));
    }
    for (n, printed) in [
        (0, (PI / 2.0 - 2.0 / 3.0) / 3.0),
        (1, -(catalan() / 4.0 - 1.0 / 24.0) * PI),
        (2, 2.0 * PI.powi(2) / 45.0),
    ] {
        out.push(audit_entry(
            "2d-large",
            -(n as i32),
            two_d::large_coefficient(n, &spec),
            printed,
        ));
    }
    out
}
