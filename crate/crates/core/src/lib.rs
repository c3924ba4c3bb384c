//! Numerical laboratory for Hitchin-Simpson equations on flat Kähler lattices.

pub mod error;
pub mod lattice;
pub mod higgs;
pub mod solver;
pub mod linalg;

pub use error::{HsError, Result};
