//! Casimir energy of a scalar field between plates under a minimal-length deformation
//! of the momentum operator, in one, two and three dimensions.
//!
//! All energies are reported as ε* = ε/|ε₀|, where ε₀ is the undeformed result, so that
//! ε*(0) = −1. The deformation enters only through β* = ħ√β/a.

#![allow(clippy::excessive_precision)]

pub mod energy;
pub mod error;
pub mod quadrature;
pub mod specialfn;
pub mod validate;

pub use energy::{compute, BetaStar, Dimension, EnergyResult, Method, PhysicalSetup};
pub use error::{Error, Result};
pub use quadrature::QuadratureSpec;
