//! Subgroups of `G = Z^m × F_n`.
//!
//! An element is written `t^a u` with `a ∈ Z^m` a row vector and `u` a reduced
//! word. A finitely generated `H ≤ G` is stored by a basis
//! `{t^{a_1}u_1, …, t^{a_r}u_r} ∪ t^{L_H}` where `u_1..u_r` is a free basis of
//! the projection `Hπ` and `L_H = H ∩ Z^m`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::intlinalg::{snf, solve_left, Matrix};
use crate::words::Letter;
use crate::{Error, Index, Int, IntLattice, IntMatrix, Result, StallingsGraph, Word};

/// `t^a u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FatfElement {
    pub vector: Vec<Int>,
    pub word: Word,
}

impl FatfElement {
    pub fn new(vector: Vec<Int>, word: Word) -> Self {
        FatfElement { vector, word }
    }

    pub fn identity(m: usize, n: usize) -> Self {
        FatfElement {
            vector: vec![Int::zero(); m],
            word: Word::identity(n),
        }
    }

    /// The central element `t^a`.
    pub fn central(vector: Vec<Int>, n: usize) -> Self {
        FatfElement {
            vector,
            word: Word::identity(n),
        }
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.vector.len(), self.word.rank())
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_identity() && self.vector.iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, other: &FatfElement) -> Result<FatfElement> {
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch {
                left: self.ambient(),
                right: other.ambient(),
            });
        }
        Ok(FatfElement {
            vector: self
                .vector
                .iter()
                .zip(&other.vector)
                .map(|(a, b)| a + b)
                .collect(),
            word: self.word.multiply(&other.word)?,
        })
    }

    pub fn inverse(&self) -> FatfElement {
        FatfElement {
            vector: self.vector.iter().map(|a| -a).collect(),
            word: self.word.inverse(),
        }
    }
}

impl fmt::Display for FatfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vector.iter().map(Int::to_string).collect();
        write!(f, "t^({}) {}", parts.join(","), self.word)
    }
}

/// A finitely generated subgroup of `Z^m × F_n`, stored by a basis.
#[derive(Clone, Debug)]
pub struct FatfSubgroup {
    m: usize,
    n: usize,
    words: Vec<Word>,
    vectors: IntMatrix,
    lattice: IntLattice,
    graph: StallingsGraph,
    /// `(E⁻¹)` where row `i` of `E` holds the tree-basis exponents of `u_i`.
    tree_to_basis: IntMatrix,
}

/// Matrices of the intersection diagram of `H` and `K`.
#[derive(Clone, Debug)]
pub struct IntersectionDiagram {
    /// Graph of `Hπ ∩ Kπ` and its basis `w_1..w_{n₃}`.
    pub meet: StallingsGraph,
    pub meet_basis: Vec<Word>,
    /// `n₃ × n₁`: exponents of the `w_j` over the basis of `Hπ`.
    pub p: IntMatrix,
    /// `n₃ × n₂`: exponents of the `w_j` over the basis of `Kπ`.
    pub p_prime: IntMatrix,
    pub a: IntMatrix,
    pub a_prime: IntMatrix,
    /// `R = P·A − P′·A′`.
    pub r: IntMatrix,
    /// `L_H + L_K`.
    pub lattice_sum: IntLattice,
    /// `S = (L_H + L_K)·R⁻¹ ≤ Z^{n₃}`; `(H ∩ K)π = S·ρ₃⁻¹`.
    pub s: IntLattice,
}

impl IntersectionDiagram {
    /// True when `(H ∩ K)π = S·ρ₃⁻¹` is finitely generated.
    pub fn finitely_generated(&self) -> bool {
        self.meet_basis.len() <= 1 || self.s.index() != Index::Infinite
    }
}

/// Result of [`FatfSubgroup::intersect`].
#[derive(Clone, Debug)]
pub enum Intersection {
    Finite(Box<FatfSubgroup>, Box<IntersectionDiagram>),
    NotFinitelyGenerated(Box<IntersectionDiagram>),
}

impl Intersection {
    pub fn subgroup(&self) -> Option<&FatfSubgroup> {
        match self {
            Intersection::Finite(h, _) => Some(h),
            Intersection::NotFinitelyGenerated(_) => None,
        }
    }

    pub fn diagram(&self) -> &IntersectionDiagram {
        match self {
            Intersection::Finite(_, d) | Intersection::NotFinitelyGenerated(d) => d,
        }
    }
}

impl FatfSubgroup {
    /// Computes a basis from arbitrary generators.
    ///
    /// The input words are kept as the free basis of `Hπ` when they already
    /// form one; otherwise the spanning-tree basis of `Γ(Hπ)` is used. The
    /// central part is `L_H = ker(W)·X`, where `X` holds the generator vectors
    /// and `W` their words' exponents over the chosen basis: abelianizing the
    /// presentation of `Hπ` on the generators is exact, so exactly these
    /// vectors arise from words that die in `F_n`.
    pub fn from_generators(m: usize, n: usize, gens: &[FatfElement]) -> Result<Self> {
        for g in gens {
            if g.ambient() != (m, n) {
                return Err(Error::AmbientMismatch {
                    left: (m, n),
                    right: g.ambient(),
                });
            }
        }
        let all_words: Vec<Word> = gens.iter().map(|g| g.word.clone()).collect();
        let graph = StallingsGraph::build(n, &all_words)?;
        let words = choose_basis(n, &all_words, &graph)?;
        let r = words.len();
        let tree_to_basis = tree_inverse(&graph, &words)?;

        let exps = |w: &Word| -> Result<Vec<Int>> {
            let tree = graph.rewrite(w)?.exponent_sums::<Int>();
            tree_to_basis.left_apply(&tree)
        };
        let w_rows: Vec<Vec<Int>> = all_words.iter().map(exps).collect::<Result<_>>()?;
        let w_mat = Matrix::from_rows(r, w_rows)?;
        let x_mat = Matrix::from_rows(m, gens.iter().map(|g| g.vector.clone()).collect())?;

        let kernel = crate::intlinalg::hnf(&w_mat).left_kernel();
        let lattice = IntLattice::from_generators(&kernel.mul(&x_mat)?);

        let mut rows = Vec::with_capacity(r);
        for i in 0..r {
            let mut e = vec![Int::zero(); r];
            e[i] = Int::from(1);
            let y = solve_left(&w_mat, &e).ok_or_else(|| {
                Error::PreconditionViolated("generators do not cover the basis".into())
            })?;
            rows.push(lattice.reduce(&x_mat.left_apply(&y)?));
        }
        let vectors = Matrix::from_rows(m, rows)?;
        Ok(FatfSubgroup {
            m,
            n,
            words,
            vectors,
            lattice,
            graph,
            tree_to_basis,
        })
    }

    /// `⟨t^{a_i}u_i, t^L⟩` from explicit data; `u` must be a free basis.
    pub fn from_basis(
        m: usize,
        n: usize,
        words: Vec<Word>,
        vectors: &IntMatrix,
        lattice: &IntLattice,
    ) -> Result<Self> {
        if vectors.rows() != words.len() || vectors.cols() != m || lattice.dimension() != m {
            return Err(Error::DimensionMismatch {
                expected: words.len(),
                found: vectors.rows(),
            });
        }
        let mut gens: Vec<FatfElement> = words
            .iter()
            .enumerate()
            .map(|(i, w)| FatfElement::new(vectors.row(i).to_vec(), w.clone()))
            .collect();
        gens.extend(
            (0..lattice.rank()).map(|i| FatfElement::central(lattice.basis().row(i).to_vec(), n)),
        );
        Self::from_generators(m, n, &gens)
    }

    pub fn whole(m: usize, n: usize) -> Self {
        let mut gens: Vec<FatfElement> = (0..n)
            .map(|i| {
                FatfElement::new(
                    vec![Int::zero(); m],
                    Word::letter(n, Letter::gen(i)).unwrap(),
                )
            })
            .collect();
        gens.extend((0..m).map(|i| {
            let mut v = vec![Int::zero(); m];
            v[i] = Int::from(1);
            FatfElement::central(v, n)
        }));
        Self::from_generators(m, n, &gens).expect("well-formed")
    }

    /// The central subgroup `Z^m`.
    pub fn center(m: usize, n: usize) -> Self {
        let gens: Vec<FatfElement> = (0..m)
            .map(|i| {
                let mut v = vec![Int::zero(); m];
                v[i] = Int::from(1);
                FatfElement::central(v, n)
            })
            .collect();
        Self::from_generators(m, n, &gens).expect("well-formed")
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// Basis words `u_1..u_r`: a free basis of `Hπ`.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// The `r × m` matrix `A` of vectors attached to the basis words.
    pub fn vectors(&self) -> &IntMatrix {
        &self.vectors
    }

    /// `L_H = H ∩ Z^m`.
    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    /// `Γ(Hπ)`.
    pub fn projection(&self) -> &StallingsGraph {
        &self.graph
    }

    /// The basis as elements: `t^{a_i}u_i` followed by `t^{b_j}`.
    pub fn basis_elements(&self) -> Vec<FatfElement> {
        let mut out: Vec<FatfElement> = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| FatfElement::new(self.vectors.row(i).to_vec(), w.clone()))
            .collect();
        out.extend(
            (0..self.lattice.rank())
                .map(|i| FatfElement::central(self.lattice.basis().row(i).to_vec(), self.n)),
        );
        out
    }

    /// `r(Hπ) + r(L_H)`.
    pub fn rank(&self) -> usize {
        self.words.len() + self.lattice.rank()
    }

    /// `max(0, r + s − 1)`.
    pub fn reduced_rank(&self) -> usize {
        self.rank().saturating_sub(1)
    }

    /// Exponents of `u ∈ Hπ` over the basis words.
    pub fn exponents(&self, u: &Word) -> Result<Vec<Int>> {
        let tree = self.graph.rewrite(u)?.exponent_sums::<Int>();
        self.tree_to_basis.left_apply(&tree)
    }

    /// The coset `a(u) + L_H` of vectors `a` with `t^a u ∈ H`, as its
    /// canonical representative, or `None` when `u ∉ Hπ`.
    pub fn vector_of(&self, u: &Word) -> Option<Vec<Int>> {
        let e = self.exponents(u).ok()?;
        let v = self.vectors.left_apply(&e).ok()?;
        Some(self.lattice.reduce(&v))
    }

    pub fn member(&self, g: &FatfElement) -> bool {
        if g.ambient() != self.ambient() {
            return false;
        }
        match self.vector_of(&g.word) {
            Some(v) => {
                let diff: Vec<Int> = g.vector.iter().zip(&v).map(|(a, b)| a - b).collect();
                self.lattice.contains(&diff)
            }
            None => false,
        }
    }

    pub fn contains_subgroup(&self, other: &FatfSubgroup) -> bool {
        other.ambient() == self.ambient() && other.basis_elements().iter().all(|g| self.member(g))
    }

    /// Mutual membership of bases.
    pub fn equal(&self, other: &FatfSubgroup) -> bool {
        self.contains_subgroup(other) && other.contains_subgroup(self)
    }

    /// `g⁻¹ H g`; vectors are unchanged since `t` is central.
    pub fn conjugate(&self, g: &FatfElement) -> Result<FatfSubgroup> {
        if g.ambient() != self.ambient() {
            return Err(Error::AmbientMismatch {
                left: self.ambient(),
                right: g.ambient(),
            });
        }
        let words: Vec<Word> = self
            .words
            .iter()
            .map(|w| w.conjugate(&g.word))
            .collect::<Result<_>>()?;
        FatfSubgroup::from_basis(self.m, self.n, words, &self.vectors, &self.lattice)
    }

    /// Builds the intersection diagram of `H` and `K`.
    pub fn diagram(&self, other: &FatfSubgroup) -> Result<IntersectionDiagram> {
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch {
                left: self.ambient(),
                right: other.ambient(),
            });
        }
        let meet = self.graph.intersect(&other.graph)?;
        let meet_basis = meet.basis();
        let n3 = meet_basis.len();
        let rows_h = meet_basis
            .iter()
            .map(|w| self.exponents(w))
            .collect::<Result<_>>()?;
        let rows_k = meet_basis
            .iter()
            .map(|w| other.exponents(w))
            .collect::<Result<_>>()?;
        let p = Matrix::from_rows(self.words.len(), rows_h)?;
        let p_prime = Matrix::from_rows(other.words.len(), rows_k)?;
        let pa = p.mul(&self.vectors)?;
        let pa2 = p_prime.mul(&other.vectors)?;
        let mut r = Matrix::zeros(n3, self.m);
        for i in 0..n3 {
            for j in 0..self.m {
                r[(i, j)] = &pa[(i, j)] - &pa2[(i, j)];
            }
        }
        let lattice_sum = self.lattice.sum(&other.lattice)?;
        let s = IntLattice::preimage(&r, &lattice_sum)?;
        Ok(IntersectionDiagram {
            meet,
            meet_basis,
            p,
            p_prime,
            a: self.vectors.clone(),
            a_prime: other.vectors.clone(),
            r,
            lattice_sum,
            s,
        })
    }

    /// `H ∩ K`, or the diagram witnessing that it is not finitely generated.
    pub fn intersect(&self, other: &FatfSubgroup) -> Result<Intersection> {
        let d = self.diagram(other)?;
        let n3 = d.meet_basis.len();
        let words: Vec<Word> = match n3 {
            0 => Vec::new(),
            1 => {
                let generator = &d.s.basis();
                if d.s.is_zero() {
                    Vec::new()
                } else {
                    let k = generator[(0, 0)]
                        .to_i64()
                        .ok_or_else(|| Error::PreconditionViolated("exponent too large".into()))?;
                    vec![d.meet_basis[0].pow(k)]
                }
            }
            _ => {
                if !d.finitely_generated() {
                    return Ok(Intersection::NotFinitelyGenerated(Box::new(d)));
                }
                StallingsGraph::abelian_preimage(self.n, &d.s, &d.meet_basis)?.basis()
            }
        };
        let mut gens = Vec::with_capacity(words.len());
        for w in words {
            let p = self.vector_of(&w).expect("w ∈ Hπ");
            let q = other.vector_of(&w).expect("w ∈ Kπ");
            let (x, _) = IntLattice::affine_intersect(&p, &self.lattice, &q, &other.lattice)?
                .expect("w lies in (H ∩ K)π");
            gens.push(FatfElement::new(x, w));
        }
        let meet_lattice = self.lattice.intersect(&other.lattice)?;
        gens.extend(
            (0..meet_lattice.rank())
                .map(|i| FatfElement::central(meet_lattice.basis().row(i).to_vec(), self.n)),
        );
        let h = FatfSubgroup::from_generators(self.m, self.n, &gens)?;
        Ok(Intersection::Finite(Box::new(h), Box::new(d)))
    }
}

/// Rank of the subgroup of `(H ∩ K)π` generated by the elements of
/// `Hπ ∩ Kπ` of length at most `radius` over the meet basis.
pub fn probe_intersection_rank(
    h: &FatfSubgroup,
    k: &FatfSubgroup,
    radius: usize,
    max_words: usize,
) -> Result<usize> {
    let d = h.diagram(k)?;
    let n3 = d.meet_basis.len();
    let mut found = Vec::new();
    let mut frontier = vec![Word::identity(n3)];
    let mut seen: HashSet<Word> = HashSet::from([Word::identity(n3)]);
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for code in 0..2 * n3 {
                let x = w * &Word::letter(n3, Letter::from_code(code))?;
                if x.len() == w.len() + 1 && seen.insert(x.clone()) {
                    if seen.len() > max_words {
                        return Err(Error::PreconditionViolated(format!(
                            "probe exceeded {max_words} words"
                        )));
                    }
                    let e = x.exponent_sums::<Int>();
                    if d.lattice_sum.contains(&d.r.left_apply(&e)?) {
                        found.push(x.substitute(&d.meet_basis, h.n)?);
                    }
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    Ok(StallingsGraph::build(h.n, &found)?.subgroup_rank())
}

/// Greedy independent subset of the input words; used as is when it is a
/// free basis of `Γ`, else falls back to the spanning-tree basis.
fn choose_basis(n: usize, words: &[Word], graph: &StallingsGraph) -> Result<Vec<Word>> {
    let mut chosen: Vec<Word> = Vec::new();
    let mut current = StallingsGraph::trivial(n);
    for w in words {
        if w.is_identity() || chosen.contains(w) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(w.clone());
        let g = StallingsGraph::build(n, &trial)?;
        if g.subgroup_rank() == current.subgroup_rank() + 1 {
            chosen = trial;
            current = g;
        }
    }
    if &current == graph && chosen.len() == graph.subgroup_rank() {
        Ok(chosen)
    } else {
        Ok(graph.basis())
    }
}

/// `E⁻¹` for `E` the tree-basis exponent matrix of a free basis of `Γ`.
fn tree_inverse(graph: &StallingsGraph, words: &[Word]) -> Result<IntMatrix> {
    let r = words.len();
    let rows = graph
        .rewrite_all(words)?
        .iter()
        .map(|w| w.exponent_sums::<Int>())
        .collect();
    let e = Matrix::from_rows(r, rows)?;
    let s = snf(&e);
    if s.rank() != r || s.factors.iter().any(|d| d != &Int::from(1)) {
        return Err(Error::PreconditionViolated(
            "words are not a free basis".into(),
        ));
    }
    // P·E·Q = I, so E⁻¹ = Q·P
    s.q.mul(&s.p)
}
