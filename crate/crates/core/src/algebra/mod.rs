//! Exact arithmetic substrate: rationals, sparse multivariate polynomials,
//! rational functions, ℚ(i), dense/sparse exact linear algebra, norms and sizes.

pub mod field;
pub mod gaussian;
pub mod matrix;
pub mod multipoly;
pub mod ratfunc;
pub mod rational;
pub mod roots;
pub mod serial;
pub mod sparse;
pub mod unipoly;
pub mod unirat;

pub use field::Field;
pub use gaussian::QI;
pub use matrix::{solve_linear, DenseMatrix, FieldMatrix};
pub use multipoly::{gcd, lcm, Monomial, MultiPoly};
pub use ratfunc::{l1_norm, representation_size, size_of, RatFunc};
pub use rational::{int, rat, Rational};
pub use roots::{poly_roots, real_poly_roots};
pub use serial::{ExactPoly, ExactRatFunc};
pub use sparse::SparseSolver;
pub use unipoly::UniPoly;
pub use unirat::UniRat;
