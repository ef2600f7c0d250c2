//! Finite-part integration resummation of the divergent weak-field
//! expansion of the spin-0 Heisenberg–Euler effective Lagrangian.

pub mod comparators;
pub mod error;
pub mod extrapolant;
pub mod finite_part;
pub mod heisenberg_euler;
pub mod linalg;
pub mod moment_solver;
pub mod precision;
pub mod quadrature;
pub mod special;
pub mod tables;

pub use error::{Error, Result};
pub use precision::{agree_digits, BigComplex, BigReal, Context};
