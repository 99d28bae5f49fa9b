//! Exact arithmetic: fields, univariate polynomials, matrices and
//! factorization.

pub mod factor;
pub mod field;
pub mod matrix;
pub mod upoly;

pub use field::{Field, NumberField, PrimeField, Rational, Rationals};
pub use matrix::ExactMatrix;
pub use upoly::UniPoly;
