//! Exact integer linear algebra: Hermite and Smith forms and lattices in `Z^m`.
//!
//! Row-vector convention throughout: a matrix `R` acts by `x ↦ x·R`, and a
//! lattice is the row space of its basis matrix.

mod lattice;
mod matrix;
mod normal;

pub use lattice::{solve_left, AdaptedBasis, Lattice};
pub use matrix::Matrix;
pub use normal::{hnf, snf, Hnf, Snf};
