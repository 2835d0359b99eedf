//! Numerical building blocks shared by the analytic modules.

pub mod ode;

pub use ode::{integrate, OdeOptions, OdeSolution, Stepper};
