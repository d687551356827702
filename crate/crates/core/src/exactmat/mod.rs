//! Exact complex-rational scalars and dense matrices.
//!
//! All equality tests in this crate are bit-exact: scalars are Gaussian
//! rationals kept in lowest terms, and elimination never rounds.

mod elim;
mod matrix;
pub mod random;
pub mod reallin;
mod scalar;

pub use matrix::CMatrix;
pub use reallin::{LinearForm, RealLinearSystem, RealSolution, SymMatrix};
pub use scalar::{format_rational, parse_rational, rational, GaussianRational, Rational};
