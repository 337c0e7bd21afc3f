use super::Matrix;
use crate::IntScalar;

/// Row Hermite normal form `U·M = [H; 0]` with `U` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf<T> {
    /// The nonzero rows: positive pivots, entries above each pivot in `[0, pivot)`.
    pub h: Matrix<T>,
    /// Column of each pivot.
    pub pivots: Vec<usize>,
    /// Unimodular `U`; its rows past `rank` span the left kernel of `M`.
    pub transform: Matrix<T>,
}

impl<T: IntScalar> Hnf<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{x : x·M = 0}`, as rows.
    pub fn left_kernel(&self) -> Matrix<T> {
        self.transform
            .select_rows(self.rank()..self.transform.rows())
    }
}

/// Smith decomposition `P·U·Q = D` with inverses of both transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<T> {
    pub p: Matrix<T>,
    pub p_inv: Matrix<T>,
    pub q: Matrix<T>,
    pub q_inv: Matrix<T>,
    /// Nonzero invariant factors `1 ≤ d_1 | d_2 | … | d_ℓ`.
    pub factors: Vec<T>,
    rows: usize,
    cols: usize,
}

impl<T: IntScalar> Snf<T> {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// `D`, the factors padded with zeros to the shape of the input.
    pub fn diagonal(&self) -> Matrix<T> {
        let mut d = Matrix::zeros(self.rows, self.cols);
        for (i, f) in self.factors.iter().enumerate() {
            d[(i, i)] = f.clone();
        }
        d
    }
}

pub fn hnf<T: IntScalar>(m: &Matrix<T>) -> Hnf<T> {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::identity(r);
    let mut pivots = Vec::new();
    let mut p = 0;
    for col in 0..c {
        if p == r {
            break;
        }
        for i in p + 1..r {
            if a[(i, col)].is_zero() {
                continue;
            }
            if a[(p, col)].is_zero() {
                a.swap_rows(p, i);
                u.swap_rows(p, i);
                continue;
            }
            let coeffs = eliminator(&a[(p, col)], &a[(i, col)]);
            a.mix_rows(p, i, &coeffs);
            u.mix_rows(p, i, &coeffs);
        }
        if a[(p, col)].is_zero() {
            continue;
        }
        if a[(p, col)].is_negative() {
            a.negate_row(p);
            u.negate_row(p);
        }
        for k in 0..p {
            let q = a[(k, col)].div_floor(&a[(p, col)]);
            if !q.is_zero() {
                let q = -q;
                a.add_row(k, p, &q);
                u.add_row(k, p, &q);
            }
        }
        pivots.push(col);
        p += 1;
    }
    Hnf {
        h: a.select_rows(0..p),
        pivots,
        transform: u,
    }
}

/// Unimodular `[[s, t], [−b/g, a/g]]` sending `(a, b)` to `(g, 0)`; `a ≠ 0`.
fn eliminator<T: IntScalar>(a: &T, b: &T) -> [T; 4] {
    if b.is_multiple_of(a) {
        return [T::one(), T::zero(), -(b.clone() / a.clone()), T::one()];
    }
    let (g, s, t) = T::xgcd(a, b);
    [s, t, -(b.clone() / g.clone()), a.clone() / g]
}

/// Inverse of an [`eliminator`] matrix `[[x, y], [z, w]]` (determinant 1).
fn inverse2<T: IntScalar>([x, y, z, w]: &[T; 4]) -> [T; 4] {
    [w.clone(), -y.clone(), -z.clone(), x.clone()]
}

fn transpose2<T: IntScalar>([x, y, z, w]: &[T; 4]) -> [T; 4] {
    [x.clone(), z.clone(), y.clone(), w.clone()]
}

pub fn snf<T: IntScalar>(m: &Matrix<T>) -> Snf<T> {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut p = Matrix::identity(r);
    let mut p_inv = Matrix::identity(r);
    let mut q = Matrix::identity(c);
    let mut q_inv = Matrix::identity(c);
    let mut factors = Vec::new();

    // Row operation `E` on D: P ← E·P, P⁻¹ ← P⁻¹·E⁻¹.
    // Column operation `F` on D: Q ← Q·F, Q⁻¹ ← F⁻¹·Q⁻¹.
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = &d[(i, j)];
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(p, p_inv, q, q_inv, factors, r, c);
            };
            d.swap_rows(t, bi);
            p.swap_rows(t, bi);
            p_inv.swap_cols(t, bi);
            d.swap_cols(t, bj);
            q.swap_cols(t, bj);
            q_inv.swap_rows(t, bj);

            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in t + 1..r {
                    if d[(i, t)].is_zero() {
                        continue;
                    }
                    let e = eliminator(&d[(t, t)], &d[(i, t)]);
                    d.mix_rows(t, i, &e);
                    p.mix_rows(t, i, &e);
                    p_inv.mix_cols(t, i, &transpose2(&inverse2(&e)));
                }
                for j in t + 1..c {
                    if d[(t, j)].is_zero() {
                        continue;
                    }
                    let f = eliminator(&d[(t, t)], &d[(t, j)]);
                    d.mix_cols(t, j, &f);
                    q.mix_cols(t, j, &f);
                    q_inv.mix_rows(t, j, &transpose2(&inverse2(&f)));
                    dirty = true;
                }
                if dirty {
                    dirty = (t + 1..r).any(|i| !d[(i, t)].is_zero());
                }
            }

            let pivot = d[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = T::one();
                    d.add_row(t, i, &one);
                    p.add_row(t, i, &one);
                    p_inv.add_col(i, t, &-one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
            p_inv.negate_col(t);
        }
        factors.push(d[(t, t)].clone());
    }
    finish(p, p_inv, q, q_inv, factors, r, c)
}

fn finish<T: IntScalar>(
    p: Matrix<T>,
    p_inv: Matrix<T>,
    q: Matrix<T>,
    q_inv: Matrix<T>,
    factors: Vec<T>,
    rows: usize,
    cols: usize,
) -> Snf<T> {
    Snf {
        p,
        p_inv,
        q,
        q_inv,
        factors,
        rows,
        cols,
    }
}
