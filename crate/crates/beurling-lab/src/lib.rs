//! Numerical laboratory for the Beurling transform on planar domains:
//! domains and decompositions, approximating polynomials and β-coefficients,
//! the operator family `T^γ`, Sobolev and boundary Besov norms, and a
//! Neumann-series Beltrami solver.

// `!(x > 0.0)` is the input check throughout because it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod beltrami;
pub mod error;
pub mod geometry;
pub mod norms;
pub mod operators;
pub mod parallel;
pub mod quadrature;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
