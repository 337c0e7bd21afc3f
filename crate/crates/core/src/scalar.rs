//! Integer scalar abstraction for the exact linear algebra.
//!
//! Everything in [`crate::intlinalg`] is written against [`IntScalar`], so the
//! same routines run over machine integers (fast, overflow-prone) and over
//! [`num_bigint::BigInt`] (the default everywhere else in the crate).

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// A Euclidean integer type usable as a matrix entry.
pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + 'static
{
    /// Extended gcd `(g, s, t)` with `s·a + t·b = g`, `g ≥ 0`.
    fn xgcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            (-e.gcd, -e.x, -e.y)
        } else {
            (e.gcd, e.x, e.y)
        }
    }

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits in every IntScalar")
    }
}

impl<T> IntScalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + 'static
{
}
