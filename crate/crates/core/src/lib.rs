//! Exact computational toolkit for plane curves with prescribed
//! singularity schemes and the invariants of the double planes they
//! branch.

pub mod algebra;
pub mod configs;
pub mod error;
pub mod plane;
pub mod scheme;
pub mod system;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
