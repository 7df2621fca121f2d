//! Exact rational scalars and dense matrices, with the reductions the
//! compatibility checks are built on: reduced row echelon form, rank,
//! nullspace and a {1}-generalized inverse. Nothing here uses floating point.

mod matrix;
mod rational;
mod reduce;

pub use matrix::{RatMatrix, RatVector};
pub use rational::{rat, Rational};
pub use reduce::{g_inverse, GInverse, inverse, nullspace, pivot_columns, rank, rref, solve_system};
