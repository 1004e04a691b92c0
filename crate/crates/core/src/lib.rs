//! Certificates for thermodynamic stability of pair potentials and for their
//! (non-)decomposition as positive plus positive definite functions, on
//! `Z_n`, `Z`, `R` and (numerically) `R^2`.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`, which every tolerance in the acceptance suite assumes.

pub mod chain;
pub mod cones;
pub mod continuum;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod plane2d;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{golden_conjugate, Real};

pub type LatticePotential = group::LatticePotential<f64>;
pub type Density = group::Density<f64>;
pub type Spectrum = group::Spectrum<f64>;
pub type Certificate = cones::Certificate<f64>;
pub type CopositivityVerdict = cones::CopositivityVerdict<f64>;
pub type CutCertificate = chain::CutCertificate<f64>;
pub type ContinuumPotential = continuum::ContinuumPotential<f64>;
pub type AtomicMeasure = continuum::AtomicMeasure<f64>;
pub type BumpFunction = continuum::BumpFunction<f64>;

pub type LatticePotential32 = group::LatticePotential<f32>;
pub type Density32 = group::Density<f32>;
