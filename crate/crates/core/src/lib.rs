//! Exact certification of iterated sumset expansion in `F_q^n`.
//!
//! The crate computes, with exact finite-field arithmetic, the objects behind
//! the shift-operator polynomial method: evaluation matrices and the
//! nondegeneracy degree of a point set, Hasse expansions of shift-operator
//! combinations, the graded leading-term spaces of a set, and products of
//! Hasse derivatives. On top of that sit dense sumset kernels, theorem
//! verifiers that return checkable reports, and the random-set experiments.

pub mod error;
pub mod exponents;
pub mod ffield;
pub mod linalg;
pub mod randexp;
pub mod shiftops;
pub mod sumsets;
pub mod verifiers;

pub use error::{Error, Result};
