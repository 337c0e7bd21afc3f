use super::{hnf, snf, Matrix, Snf};
use crate::{Error, Index, IntScalar, Result};

/// Subgroup of `Z^m`, stored by its row Hermite basis (no zero rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<T> {
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

/// Output of [`Lattice::complete_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBasis<T> {
    /// Rows `b_1..b_m`, a basis of `Z^m`.
    pub basis: Matrix<T>,
    /// `λ_1..λ_s` with `{λ_i·b_i}` a basis of the lattice.
    pub scales: Vec<T>,
}

impl<T: IntScalar> Lattice<T> {
    /// Lattice spanned by the rows of `gens`.
    pub fn from_generators(gens: &Matrix<T>) -> Self {
        let h = hnf(gens);
        Lattice {
            basis: h.h,
            pivots: h.pivots,
        }
    }

    pub fn from_vectors(dim: usize, vectors: &[Vec<T>]) -> Result<Self> {
        Ok(Self::from_generators(&Matrix::from_rows(
            dim,
            vectors.to_vec(),
        )?))
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(&Matrix::zeros(0, dim))
    }

    pub fn full(dim: usize) -> Self {
        Self::from_generators(&Matrix::identity(dim))
    }

    pub fn dimension(&self) -> usize {
        self.basis.cols()
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The Hermite basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Canonical representative of `v` modulo the lattice: each pivot
    /// coordinate is brought into `[0, pivot)`.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut v = v.to_vec();
        for (k, &c) in self.pivots.iter().enumerate() {
            let q = v[c].div_floor(&self.basis[(k, c)]);
            if !q.is_zero() {
                for j in c..v.len() {
                    v[j] = v[j].clone() - q.clone() * self.basis[(k, j)].clone();
                }
            }
        }
        v
    }

    /// Coefficients of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        if v.len() != self.dimension() {
            return None;
        }
        let mut v = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (k, &c) in self.pivots.iter().enumerate() {
            if v[..c].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = v[c].div_rem(&self.basis[(k, c)]);
            if !r.is_zero() {
                return None;
            }
            for j in c..v.len() {
                v[j] = v[j].clone() - q.clone() * self.basis[(k, j)].clone();
            }
            coeffs.push(q);
        }
        v.iter().all(T::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice<T>) -> bool {
        (0..other.rank()).all(|i| self.contains(other.basis.row(i)))
    }

    fn check_dim(&self, other: &Lattice<T>) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Lattice<T>) -> Result<Lattice<T>> {
        self.check_dim(other)?;
        Ok(Self::from_generators(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &Lattice<T>) -> Result<Lattice<T>> {
        self.check_dim(other)?;
        // (x, y) with x·B1 + y·B2 = 0 gives x·B1 ∈ L1 ∩ L2
        let kernel = hnf(&self.basis.vstack(&other.basis)?).left_kernel();
        let x = kernel.select_cols(&(0..self.rank()).collect::<Vec<_>>());
        Ok(Self::from_generators(&x.mul(&self.basis)?))
    }

    /// `[Z^m : L]`: the product of the Hermite pivots when `L` has full rank.
    pub fn index(&self) -> Index<T> {
        if self.rank() < self.dimension() {
            return Index::Infinite;
        }
        let mut prod = T::one();
        for (k, &c) in self.pivots.iter().enumerate() {
            prod = prod * self.basis[(k, c)].clone();
        }
        Index::Finite(prod)
    }

    /// Smallest direct summand of `Z^m` containing the lattice.
    pub fn saturation(&self) -> Lattice<T> {
        // vectors killed by every integer relation among the columns of B
        let null = hnf(&self.basis.transpose()).left_kernel();
        let sat = hnf(&null.transpose()).left_kernel();
        Self::from_generators(&sat)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }

    /// Basis `b_1..b_m` of `Z^m` and scales `λ_1..λ_s` with `{λ_i b_i}` a basis
    /// of the lattice, read off the Smith form `P·B·Q = D` as the rows of `Q⁻¹`.
    pub fn complete_basis(&self) -> AdaptedBasis<T> {
        let s = snf(&self.basis);
        AdaptedBasis {
            basis: s.q_inv,
            scales: s.factors,
        }
    }

    /// `{x ∈ Z^k : x·R ∈ L}` for a `k × m` matrix `R`.
    pub fn preimage(r: &Matrix<T>, lattice: &Lattice<T>) -> Result<Lattice<T>> {
        if r.cols() != lattice.dimension() {
            return Err(Error::DimensionMismatch {
                expected: lattice.dimension(),
                found: r.cols(),
            });
        }
        let kernel = hnf(&r.vstack(&lattice.basis)?).left_kernel();
        let x = kernel.select_cols(&(0..r.rows()).collect::<Vec<_>>());
        Ok(Self::from_generators(&x))
    }

    /// A point of `(p + L1) ∩ (q + L2)` and the lattice `L1 ∩ L2`, or `None`
    /// when the cosets are disjoint.
    pub fn affine_intersect(
        p: &[T],
        l1: &Lattice<T>,
        q: &[T],
        l2: &Lattice<T>,
    ) -> Result<Option<(Vec<T>, Lattice<T>)>> {
        l1.check_dim(l2)?;
        let m = l1.dimension();
        if p.len() != m || q.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: if p.len() != m { p.len() } else { q.len() },
            });
        }
        let target: Vec<T> = q
            .iter()
            .zip(p)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        let stacked = l1.basis.vstack(&l2.basis)?;
        let Some(c) = solve_left(&stacked, &target) else {
            return Ok(None);
        };
        let shift = l1.basis.left_apply(&c[..l1.rank()])?;
        let x = p.iter().zip(shift).map(|(a, b)| a.clone() + b).collect();
        Ok(Some((x, l1.intersect(l2)?)))
    }

    /// Minimal number of generators of the image of `row(G)` in `(Z/N)^m`,
    /// with the Smith data of `[G; N·I]` whose factors are `e_1..e_m`.
    pub fn min_generators_mod(g: &Matrix<T>, n: &T) -> Result<(usize, Snf<T>)> {
        if !n.is_positive() {
            return Err(Error::PreconditionViolated(
                "modulus must be positive".into(),
            ));
        }
        let stacked = g.vstack(&Matrix::scalar(g.cols(), n.clone()))?;
        let s = snf(&stacked);
        let count = s.factors.iter().filter(|e| *e != n).count();
        Ok((count, s))
    }

    /// Vectors whose images complete `L0 π_N` to a minimal generating set of
    /// `L1 π_N`, where `π_N : Z^m → (Z/N)^m`.
    ///
    /// `L0` must be a direct summand of `Z^m` lying in `L1 + N·Z^m`; then
    /// `L1 + N·Z^m = L0 ⊕ (L1 + N·Z^m) ∩ Y` for any complement `Y`, and the
    /// Smith-adapted basis of the second summand supplies the vectors.
    pub fn complement_in_quotient(l0: &Lattice<T>, l1: &Lattice<T>, n: &T) -> Result<Vec<Vec<T>>> {
        l0.check_dim(l1)?;
        if !n.is_positive() {
            return Err(Error::PreconditionViolated(
                "modulus must be positive".into(),
            ));
        }
        let m = l0.dimension();
        let big = l1.sum(&Lattice::from_generators(&Matrix::scalar(m, n.clone())))?;
        if !l0.is_saturated() || !big.contains_lattice(l0) {
            return Err(Error::NotDirectSummand);
        }
        let adapted = l0.complete_basis();
        let s = l0.rank();
        // coordinates in the basis b_1..b_m are x ↦ x·Q, and Q = (Q⁻¹)⁻¹
        let q = snf(&l0.basis).q;
        let coords = big.basis.mul(&q)?;
        let tail: Vec<usize> = (s..m).collect();
        let projected = coords.select_cols(&tail);
        let ys = snf(&projected);
        let mut out = Vec::new();
        for (i, f) in ys.factors.iter().enumerate() {
            if f == n {
                continue;
            }
            let mut coeffs = vec![T::zero(); m];
            for (k, j) in tail.iter().enumerate() {
                coeffs[*j] = f.clone() * ys.q_inv[(i, k)].clone();
            }
            out.push(adapted.basis.left_apply(&coeffs)?);
        }
        Ok(out)
    }
}

/// Some integer `c` with `c·M = target`, if one exists.
pub fn solve_left<T: IntScalar>(m: &Matrix<T>, target: &[T]) -> Option<Vec<T>> {
    if target.len() != m.cols() {
        return None;
    }
    let h = hnf(m);
    let mut residual = target.to_vec();
    let mut z = Vec::with_capacity(h.rank());
    for (k, &c) in h.pivots.iter().enumerate() {
        if residual[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = residual[c].div_rem(&h.h[(k, c)]);
        if !r.is_zero() {
            return None;
        }
        for j in c..residual.len() {
            residual[j] = residual[j].clone() - q.clone() * h.h[(k, j)].clone();
        }
        z.push(q);
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let u = h.transform.select_rows(0..h.rank());
    u.left_apply(&z).ok()
}
