//! Stability analysis of Runge-Kutta time stepping for method-of-lines
//! discretizations: stability polynomials, weighted numerical ranges,
//! model operators and an experiment harness.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32`, `f64`); the
//! SSP decompositions are also available over exact rationals. The aliases
//! below fix the scalar to `f64`.

pub mod error;
pub mod harness;
pub mod linalg;
pub mod numerical_range;
pub mod operators;
pub mod scalar;
pub mod stability_polynomials;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use numerical_range::{RangeBoundary, Symmetrizer};
pub use operators::OperatorBundle;
pub use scalar::Real;
pub use stability_polynomials::StabilityPolynomial;

pub type Matrix = ComplexMatrix<f64>;
pub type Polynomial = StabilityPolynomial<f64>;
pub type Weight = Symmetrizer<f64>;
pub type Bundle = OperatorBundle<f64>;
pub type Boundary = RangeBoundary<f64>;
pub type Matrix32 = ComplexMatrix<f32>;
pub type Polynomial32 = StabilityPolynomial<f32>;
