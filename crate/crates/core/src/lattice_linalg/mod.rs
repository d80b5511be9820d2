//! Exact integer linear algebra: Smith normal form, kernels, cokernels and
//! integer solutions of linear systems. Everything is arbitrary precision.

mod group;
mod matrix;
pub mod rational;
mod smith;

pub use group::{cokernel, AbelianGroupPresentation, GroupElement};
pub use matrix::{IntMatrix, IntVector};
pub use smith::{image_basis, kernel_basis, rank, smith_normal_form, solve_integer_system, SmithForm};
