//! Homogeneous polynomials in x, y, z and the structures built on them.

pub mod bipoly;
pub mod curve;
pub mod local;
pub mod symmetry;

pub use bipoly::BiPoly;
pub use curve::{basis_size, monomial_basis, monomial_index, Monomial, PlaneCurve, Var};
pub use symmetry::{Eigenspace, ProjInvolution};
