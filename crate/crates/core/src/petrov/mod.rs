//! Polynomial forms modulo the Hamiltonian and their division.

pub mod division;
pub mod forms;
pub mod hamiltonian;
pub mod poly2;

pub use division::{
    compose_with_h, degree_bounds_hold, divide_1form, divide_1form_with, divide_2form, divide_2form_with, verify_decomposition,
    DivisionOptions, PetrovDecomposition, Remainder,
};
pub use forms::{basis_forms, dh_wedge, exact, BasisForm, PolyForm};
pub use hamiltonian::{is_basis_regular, Hamiltonian};
pub use poly2::Poly2;
