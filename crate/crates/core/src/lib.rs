//! Picard–Fuchs systems for polynomial Hamiltonians, derived Fuchsian
//! operators, slit geometry and zero counting for Abelian integrals.

pub mod abelian;
pub mod algebra;
pub mod analytic;
pub mod derived;
pub mod error;
pub mod numeric;
pub mod petrov;
pub mod picard_fuchs;
pub mod slits;

pub use error::{Error, Result};
