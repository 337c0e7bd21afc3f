//! Degrees of compression and inertia for finitely generated subgroups of
//! free groups `F_n` and of free-abelian times free groups `Z^m × F_n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: reduced words over a finite alphabet.
//! * [`stallings`]: folded core graphs, membership, intersections, quotients.
//! * [`whitehead`] and [`extensions`]: free-factor decisions, the fringe of a
//!   subgroup, algebraic extensions and the degree of compression in `F_n`.
//! * [`intlinalg`]: exact Hermite/Smith normal forms and integer lattices,
//!   generic over the integer scalar (see [`IntScalar`]).
//! * [`fatf`]: subgroups of `Z^m × F_n`, bases, membership and intersections.
//! * [`degrees`]: `d(A, B, U)`, the degree of compression in `Z^m × F_n`, and
//!   the inertia classification with its witness families.
//!
//! All arithmetic is exact. The concrete scalar used by the group-theoretic
//! layers is [`Int`] (arbitrary precision); ratios are [`Rational`].

pub mod degrees;
pub mod error;
pub mod extensions;
pub mod fatf;
pub mod intlinalg;
pub mod scalar;
pub mod stallings;
pub mod whitehead;
pub mod words;

pub use error::{Error, Result};
pub use scalar::IntScalar;

/// Arbitrary-precision integer used throughout the group-theoretic layers.
pub type Int = num_bigint::BigInt;
/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;
/// Integer matrix over [`Int`].
pub type IntMatrix = intlinalg::Matrix<Int>;
/// Integer lattice over [`Int`].
pub type IntLattice = intlinalg::Lattice<Int>;
/// Smith decomposition over [`Int`].
pub type SnfDecomposition = intlinalg::Snf<Int>;

pub use degrees::{DAbuCertificate, DcGResult, DiReport};
pub use extensions::{DcResult, Fringe};
pub use fatf::{FatfElement, FatfSubgroup, IntersectionDiagram};
pub use stallings::{StallingsGraph, VertexPartition};
pub use words::{Alphabet, Letter, Word};

/// Index of a subgroup: a positive integer or infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Index<T> {
    Finite(T),
    Infinite,
}

/// Resource limits for the enumerative algorithms.
///
/// Exceeding any of them is reported as an error, never by truncating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of distinct graphs in a fringe.
    pub max_fringe: usize,
    /// Maximum number of Whitehead descent steps per free-factor test.
    pub max_descent: usize,
    /// Maximum number of residue-lift combinations in `d(A, B, U)`.
    pub max_combos: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_fringe: 1_000_000,
            max_descent: 10_000,
            max_combos: 1_000_000,
        }
    }
}
