//! Exact constructions for semilinear operators and consimilarity.
//!
//! The crate works over the Gaussian rationals so that every identity is
//! checked exactly. It provides
//!
//! - [`exactmat`]: scalars, dense matrices, elimination and a realified
//!   linear solver used as an independent oracle;
//! - [`semilinear`]: matrices of semilinear maps, their composition, change of
//!   basis, and the consimilarity action on matrix pairs;
//! - [`nilstruct`]: nilpotent block-Jordan matrices and the substrip
//!   permutation to Weyr form;
//! - [`commutant`]: the parametrized solution set of `S̄J = JS`;
//! - [`biquiver`]: biquivers, their representations and base change;
//! - [`reductions`]: encodings of commuting pairs, operator tuples and biquiver
//!   representations as matrix pairs `(J, M)`, with witness construction and
//!   extraction;
//! - [`selfcheck`]: seeded property trials over all of the above.

pub mod biquiver;
pub mod commutant;
pub mod error;
pub mod exactmat;
pub mod nilstruct;
pub mod reductions;
pub mod selfcheck;
pub mod semilinear;

pub use error::{Error, Result};
pub use exactmat::{CMatrix, GaussianRational, Rational};
