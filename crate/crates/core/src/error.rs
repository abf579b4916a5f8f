use thiserror::Error;

use crate::energy::{Dimension, Method};
use crate::quadrature::QuadratureError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("index {index} exceeds table maximum {max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// A series or representation was asked for a point where it is not valid.
    #[error("{method} is not valid at beta* = {beta_star} ({reason})")]
    OutsideValidity {
        method: Method,
        beta_star: f64,
        reason: &'static str,
    },

    #[error("method {method} is not available for dimension {dimension}")]
    MethodUnavailable {
        method: Method,
        dimension: Dimension,
    },

    #[error(
        "mode-sum tail correction cannot reach tolerance {tolerance:e} (achievable {achievable:e})"
    )]
    TailCorrection { tolerance: f64, achievable: f64 },

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature(_) | Error::TailCorrection { .. })
    }
}
