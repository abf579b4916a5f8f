//! Command implementations behind the `casimir` binary.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use casimir_core::energy::{beta_star_from_physical, eps_physical};
use casimir_core::validate::{
    coefficient_audit, cross_validate_with, csv_row, ToleranceMatrix, CSV_HEADER,
};
use casimir_core::{
    compute, BetaStar, Dimension, EnergyResult, Error, Method, PhysicalSetup, QuadratureSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir energy with a minimal-length deformation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy at a single beta*, printed as one CSV row
    Compute(ComputeArgs),
    /// Energy over a grid of beta*, written as CSV
    Sweep(SweepArgs),
    /// Compare every representation at one point
    Validate(ValidateArgs),
    /// Convert physical parameters and compute
    Physical(PhysicalArgs),
    /// Check printed series coefficients against their general terms
    Audit,
}

/// `auto` or an explicit method name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodChoice(pub Option<Method>);

impl MethodChoice {
    /// Closed form at β* = 0, the single integral otherwise.
    pub fn resolve(self) -> Method {
        self.0.unwrap_or(Method::Integral)
    }
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    if s == "auto" {
        return Ok(MethodChoice(None));
    }
    s.parse::<Method>()
        .map(|m| MethodChoice(Some(m)))
        .map_err(|e| e.to_string())
}

fn parse_dimension(s: &str) -> Result<Dimension, String> {
    s.parse::<u8>()
        .ok()
        .and_then(Dimension::from_u8)
        .ok_or_else(|| format!("dimension must be 1, 2 or 3, got {s:?}"))
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub dim: Dimension,
    #[arg(long)]
    pub beta_star: f64,
    /// auto, integral, double-integral, mode-sum, series-small or series-large
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    pub method: MethodChoice,
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
    /// Series order (highest power of beta* or 1/beta* kept)
    #[arg(long)]
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// One or more dimensions, e.g. `--dim 1,2,3`
    #[arg(long, value_parser = parse_dimension, value_delimiter = ',', required = true)]
    pub dim: Vec<Dimension>,
    #[arg(long)]
    pub beta_min: f64,
    #[arg(long)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Log)]
    pub scale: Scale,
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    pub method: MethodChoice,
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
    #[arg(long)]
    pub order: Option<u32>,
    /// Output file; standard output if omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub dim: Dimension,
    #[arg(long)]
    pub beta_star: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
    /// Relative tolerance between exact representations
    #[arg(long, default_value_t = ToleranceMatrix::default().exact)]
    pub exact_tol: f64,
    /// Series must lie within this multiple of their error estimate
    #[arg(long, default_value_t = ToleranceMatrix::default().series_factor)]
    pub series_factor: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct PhysicalArgs {
    #[arg(long, value_parser = parse_dimension)]
    pub dim: Dimension,
    /// Deformation parameter beta
    #[arg(long)]
    pub beta: f64,
    /// Plate separation
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar_c: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or a point outside a method's domain.
    Usage(String),
    /// A numerical procedure did not converge.
    Numerical(String),
    /// A validation report or audit did not pass.
    Rejected,
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Rejected => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
            CliError::Rejected => f.write_str("validation failed"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn quadrature_spec(rel_tol: f64) -> Result<QuadratureSpec, CliError> {
    QuadratureSpec::with_rel_tol(rel_tol).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Compute(args) => cmd_compute(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out),
        Command::Validate(args) => cmd_validate(&args, out),
        Command::Physical(args) => cmd_physical(&args, out),
        Command::Audit => cmd_audit(out),
    }
}

fn compute_point(
    dim: Dimension,
    beta_star: BetaStar,
    method: MethodChoice,
    spec: &QuadratureSpec,
    order: Option<u32>,
) -> Result<EnergyResult, CliError> {
    Ok(compute(dim, beta_star, method.resolve(), spec, order)?)
}

pub fn cmd_compute(args: &ComputeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = quadrature_spec(args.rel_tol)?;
    let beta = BetaStar::new(args.beta_star)?;
    let r = compute_point(args.dim, beta, args.method, &spec, args.order)?;
    writeln!(out, "{}", csv_row(&r))?;
    Ok(())
}

/// Grid of `points` values from `min` to `max`, both included exactly.
pub fn grid(min: f64, max: f64, points: usize, scale: Scale) -> Result<Vec<f64>, CliError> {
    if !(min.is_finite() && max.is_finite()) || min < 0.0 || max <= min {
        return Err(CliError::Usage(format!(
            "need 0 <= beta-min < beta-max, got {min} and {max}"
        )));
    }
    if points < 2 {
        return Err(CliError::Usage(format!(
            "need at least 2 points, got {points}"
        )));
    }
    if scale == Scale::Log && min == 0.0 {
        return Err(CliError::Usage(
            "logarithmic scale needs beta-min > 0".into(),
        ));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| match (i, scale) {
            (0, _) => min,
            (i, _) if i == points - 1 => max,
            (i, Scale::Linear) => min + (max - min) * i as f64 / last,
            (i, Scale::Log) => min * (max / min).powf(i as f64 / last),
        })
        .collect())
}

/// All sweep rows, ordered by dimension and then ascending β*.
pub fn sweep_rows(args: &SweepArgs) -> Result<Vec<EnergyResult>, CliError> {
    let spec = quadrature_spec(args.rel_tol)?;
    let betas = grid(args.beta_min, args.beta_max, args.points, args.scale)?
        .into_iter()
        .map(BetaStar::new)
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(Dimension, BetaStar)> = args
        .dim
        .iter()
        .flat_map(|&d| betas.iter().map(move |&b| (d, b)))
        .collect();
    jobs.par_iter()
        .map(|&(d, b)| compute_point(d, b, args.method, &spec, args.order))
        .collect()
}

fn write_atomically(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let written = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path));
    if written.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    written
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = sweep_rows(args)?;
    let mut csv = String::with_capacity(96 * (rows.len() + 1));
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&csv_row(r));
        csv.push('\n');
    }
    match &args.out {
        Some(path) => write_atomically(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = quadrature_spec(args.rel_tol)?;
    let beta = BetaStar::new(args.beta_star)?;
    for (name, v) in [
        ("exact-tol", args.exact_tol),
        ("series-factor", args.series_factor),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
        }
    }
    let tolerances = ToleranceMatrix {
        exact: args.exact_tol,
        series_factor: args.series_factor,
    };
    let report = cross_validate_with(args.dim, beta, &spec, &tolerances);
    match args.format {
        ReportFormat::Text => out.write_all(report.to_text().as_bytes())?,
        ReportFormat::Csv => out.write_all(report.to_csv().as_bytes())?,
    }
    if report.overall_pass {
        Ok(())
    } else {
        Err(CliError::Rejected)
    }
}

pub fn cmd_physical(args: &PhysicalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = quadrature_spec(args.rel_tol)?;
    let setup = PhysicalSetup::new(args.beta, args.a, args.hbar_c)?;
    let beta = beta_star_from_physical(&setup)?;
    let r = compute_point(args.dim, beta, MethodChoice(None), &spec, None)?;
    let energy = eps_physical(&r, &setup)?;
    writeln!(out, "beta_star,eps_star,eps_physical")?;
    writeln!(
        out,
        "{:.16e},{:.16e},{:.16e}",
        beta.value(),
        r.eps_star,
        energy
    )?;
    Ok(())
}

pub fn cmd_audit(out: &mut dyn Write) -> Result<(), CliError> {
    let audit = coefficient_audit();
    writeln!(out, "series,power,generated,printed,rel_dev,pass")?;
    for e in &audit {
        writeln!(
            out,
            "{},{},{:.16e},{:.16e},{:.3e},{}",
            e.series, e.power, e.generated, e.printed, e.relative_deviation, e.pass
        )?;
    }
    if audit.iter().all(|e| e.pass) {
        Ok(())
    } else {
        Err(CliError::Rejected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = grid(0.01, 1000.0, 50, Scale::Log).unwrap();
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[49], 1000.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(grid(0.5, 2.0, 2, Scale::Linear).unwrap(), vec![0.5, 2.0]);
        assert_eq!(
            grid(0.0, 1.0, 3, Scale::Linear).unwrap(),
            vec![0.0, 0.5, 1.0]
        );
    }

    #[test]
    fn grid_rejects_bad_ranges() {
        assert!(grid(0.0, 1.0, 5, Scale::Log).is_err());
        assert!(grid(1.0, 1.0, 5, Scale::Linear).is_err());
        assert!(grid(0.1, 1.0, 1, Scale::Linear).is_err());
        assert!(grid(f64::NAN, 1.0, 3, Scale::Linear).is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!(parse_method("auto").unwrap(), MethodChoice(None));
        assert_eq!(
            parse_method("mode-sum").unwrap(),
            MethodChoice(Some(Method::ModeSum))
        );
        assert!(parse_method("simpson").is_err());
        assert!(parse_dimension("4").is_err());
        assert_eq!(parse_dimension("2").unwrap(), Dimension::D2);
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        let domain: CliError = BetaStar::new(-1.0).unwrap_err().into();
        assert_eq!(domain.exit_code(), 2);
        assert_eq!(CliError::Rejected.exit_code(), 1);
        let numerical: CliError = Error::TailCorrection {
            tolerance: 1e-20,
            achievable: 1e-10,
        }
        .into();
        assert_eq!(numerical.exit_code(), 3);
    }
}
