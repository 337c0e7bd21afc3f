//! Degrees of compression and inertia in `Z^m × F_n`.
//!
//! `dc_G(H) = r̃(H) / min_J { r̃(J) + d(A, B, U_J) }` over the algebraic
//! extensions `J` of `Hπ`, where `d(A, B, U)` is the least rank of a lattice
//! `L ⊇ row(B)` admitting `C` with `row(A − U·C) ≤ L`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extensions::{algebraic_extensions, reduced_rank_ratio};
use crate::fatf::{FatfElement, FatfSubgroup};
use crate::intlinalg::{hnf, snf, solve_left, Matrix};
use crate::words::Letter;
use crate::{
    Caps, Error, Index, Int, IntLattice, IntMatrix, Rational, Result, StallingsGraph, Word,
};

/// A lattice `L` and matrix `C` realizing `d(A, B, U) = r(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DAbuCertificate {
    pub value: usize,
    pub lattice: IntLattice,
    pub c: IntMatrix,
}

impl DAbuCertificate {
    /// `row(B) ≤ L`, `row(A − U·C) ≤ L` and `r(L) = d`.
    pub fn validate(&self, a: &IntMatrix, b: &IntMatrix, u: &IntMatrix) -> bool {
        let Ok(uc) = u.mul(&self.c) else {
            return false;
        };
        if uc.rows() != a.rows() || uc.cols() != a.cols() {
            return false;
        }
        let b_ok = (0..b.rows()).all(|i| self.lattice.contains(b.row(i)));
        let a_ok = (0..a.rows()).all(|i| {
            let diff: Vec<Int> = a.row(i).iter().zip(uc.row(i)).map(|(x, y)| x - y).collect();
            self.lattice.contains(&diff)
        });
        b_ok && a_ok && self.lattice.rank() == self.value
    }
}

/// One algebraic extension `J` of `Hπ` with its contribution to `dc`.
#[derive(Clone, Debug)]
pub struct DcRow {
    pub extension: StallingsGraph,
    /// The basis of `J` the matrix `U_J` is written over.
    pub basis: Vec<Word>,
    pub reduced_rank: usize,
    pub u: IntMatrix,
    pub certificate: DAbuCertificate,
    /// `⟨t^{c_i}v_i, t^L⟩`, an overgroup of `H` with `r̃ = r̃(J) + d`.
    pub witness: FatfSubgroup,
}

impl DcRow {
    pub fn denominator(&self) -> usize {
        self.reduced_rank + self.certificate.value
    }
}

#[derive(Clone, Debug)]
pub struct DcGResult {
    pub value: Rational,
    pub witness: FatfSubgroup,
    pub table: Vec<DcRow>,
    /// Set when `Hπ` is trivial, where the value is 1 directly.
    pub trivial_projection: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiCase {
    /// `r(Hπ) ≤ 1`: `di = 1`.
    ProjectionSmall,
    /// `r(Hπ) ≥ 2` and `[Z^m : L_H] = ∞`: `di = ∞`.
    InfiniteIndexCenter,
    /// `r(Hπ) ≥ 2` and `[Z^m : L_H] = l < ∞`: `di ≤ l·di_{F_n}(Hπ)`.
    FiniteIndexCenter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiValue {
    Finite(Rational),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct DiReport {
    pub case: DiCase,
    /// Set in the first two cases.
    pub value: Option<DiValue>,
    pub lower: Rational,
    /// `None` means unbounded.
    pub upper: Option<Rational>,
    /// `[Z^m : L_H]` in the finite-index case.
    pub index: Option<Int>,
    pub dc: Option<Rational>,
    /// The subgroup attaining `lower`, with `r̃(H ∩ K)`.
    pub witness: Option<(FatfSubgroup, usize)>,
}

/// Candidate overgroups scanned by [`di_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchFamily {
    /// `K_N` for `N = 1..=budget`, when `r(Hπ) ≥ 2` and `[Z^m : L_H] = ∞`.
    Kn,
    /// Random subgroups with short basis words and small vectors.
    Random,
    /// `H`'s words with perturbed vectors over finite-index lattices.
    LatticeVariations,
    All,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub ratio: Rational,
    pub witness: FatfSubgroup,
    pub intersection_rank: usize,
    pub examined: usize,
    /// Candidates dropped: cyclic, not finitely generated or too large.
    pub skipped: usize,
}

/// Largest index of `S` for which an intersection is expanded during search.
const SEARCH_INDEX_CAP: u64 = 4096;

/// `U_J`: row `i` holds the exponents of `u_i` over the basis of `J`.
pub fn u_matrix(h: &FatfSubgroup, j: &StallingsGraph) -> Result<IntMatrix> {
    let basis = extension_basis(h, j);
    u_matrix_over(h, j, &basis)
}

fn u_matrix_over(h: &FatfSubgroup, j: &StallingsGraph, basis: &[Word]) -> Result<IntMatrix> {
    let e = tree_inverse(j, basis)?;
    let mut rows = Vec::with_capacity(h.words().len());
    for w in h.words() {
        if !j.contains(w) {
            return Err(Error::NotContained);
        }
        let tree = j.rewrite(w)?.exponent_sums::<Int>();
        rows.push(e.left_apply(&tree)?);
    }
    Matrix::from_rows(basis.len(), rows)
}

/// The basis of `J` used in `U_J`: `H`'s own words when `J = Hπ`.
fn extension_basis(h: &FatfSubgroup, j: &StallingsGraph) -> Vec<Word> {
    if j == h.projection() {
        h.words().to_vec()
    } else {
        j.basis()
    }
}

fn tree_inverse(j: &StallingsGraph, basis: &[Word]) -> Result<IntMatrix> {
    let rows = j
        .rewrite_all(basis)?
        .iter()
        .map(|w| w.exponent_sums::<Int>())
        .collect();
    let e = Matrix::from_rows(basis.len(), rows)?;
    let s = snf(&e);
    s.q.mul(&s.p)
}

fn lattice_of_rows(m: usize, rows: &[Vec<Int>]) -> Result<IntLattice> {
    IntLattice::from_vectors(m, rows)
}

/// `d(A, B, U)` with a certificate.
///
/// After the Smith form `P·U·Q = diag(d_1..d_ℓ)` the problem splits: rows of
/// `P·A` past `ℓ` join `B`; rows with `d_i = 1` are absorbed by `c′_i`; the
/// rest need `L` to meet `a′_i + d_i·Z^m`. Modulo `d_r` this becomes a choice
/// of residue lifts, and the optimal `L` is the saturation of `B` plus a
/// minimal completion in `(Z/d_r)^m`.
pub fn d_abu(a: &IntMatrix, b: &IntMatrix, u: &IntMatrix, caps: &Caps) -> Result<DAbuCertificate> {
    let (r, m, p) = (a.rows(), a.cols(), u.cols());
    if u.rows() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: u.rows(),
        });
    }
    if b.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.cols(),
        });
    }
    let s = snf(u);
    let ell = s.rank();
    let a2 = s.p.mul(a)?;
    let mut fixed: Vec<Vec<Int>> = b.to_rows();
    fixed.extend((ell..r).map(|i| a2.row(i).to_vec()));
    let l0 = lattice_of_rows(m, &fixed)?.saturation();

    let mut c2 = Matrix::zeros(p, m);
    let hard: Vec<usize> = (0..ell).filter(|&i| !s.factors[i].is_one()).collect();
    for i in (0..ell).filter(|i| s.factors[*i].is_one()) {
        for k in 0..m {
            c2[(i, k)] = a2[(i, k)].clone();
        }
    }

    let lattice = if hard.is_empty() {
        lattice_of_rows(m, &fixed)?
    } else {
        let top = s.factors[ell - 1].clone();
        let moduli: Vec<Int> = hard.iter().map(|&i| &top / &s.factors[i]).collect();
        let combos = count_combos(&moduli, m);
        if combos > caps.max_combos {
            return Err(Error::CombinationCapExceeded {
                combos,
                cap: caps.max_combos,
            });
        }
        let lifts = best_lifts(&a2, &s.factors, &hard, &moduli, &l0, &top)?;
        let mut gens = l0.basis().to_rows();
        gens.extend(lifts.iter().cloned());
        let l1 = lattice_of_rows(m, &gens)?;
        let mut basis = l0.basis().to_rows();
        basis.extend(IntLattice::complement_in_quotient(&l0, &l1, &top)?);
        let lattice = lattice_of_rows(m, &basis)?;
        // ℓ_i ∈ L with ℓ_i ≡ v_i (mod d_r), then d_i·c′_i = a′_i − ℓ_i
        let modded = lattice.basis().vstack(&Matrix::scalar(m, top.clone()))?;
        for (&i, v) in hard.iter().zip(&lifts) {
            let coeffs = solve_left(&modded, v).ok_or_else(|| {
                Error::PreconditionViolated("lift not reachable modulo d_r".into())
            })?;
            let ell_i = lattice.basis().left_apply(&coeffs[..lattice.rank()])?;
            for k in 0..m {
                let diff = &a2[(i, k)] - &ell_i[k];
                debug_assert!((&diff % &s.factors[i]).is_zero());
                c2[(i, k)] = diff / &s.factors[i];
            }
        }
        lattice
    };

    let cert = DAbuCertificate {
        value: lattice.rank(),
        lattice,
        c: s.q.mul(&c2)?,
    };
    if !cert.validate(a, b, u) {
        return Err(Error::PreconditionViolated(
            "certificate failed validation".into(),
        ));
    }
    Ok(cert)
}

fn count_combos(moduli: &[Int], m: usize) -> u128 {
    let mut total: u128 = 1;
    for q in moduli {
        let q: u128 = q.try_into().unwrap_or(u128::MAX);
        for _ in 0..m {
            total = total.saturating_mul(q);
        }
    }
    total
}

/// Lifts `v_i = a′_i + d_i·t_i`, `t_i ∈ (Z/(d_r/d_i))^m`, minimising the
/// number of generators of `(L0 + ⟨v⟩ + d_r·Z^m) / d_r·Z^m`; first minimum
/// in mixed-radix order.
fn best_lifts(
    a2: &IntMatrix,
    factors: &[Int],
    hard: &[usize],
    moduli: &[Int],
    l0: &IntLattice,
    top: &Int,
) -> Result<Vec<Vec<Int>>> {
    let m = a2.cols();
    let radices: Vec<Int> = moduli
        .iter()
        .flat_map(|q| std::iter::repeat_n(q.clone(), m))
        .collect();
    let mut digits = vec![Int::zero(); radices.len()];
    let floor = l0.rank();
    let mut best: Option<(usize, Vec<Vec<Int>>)> = None;
    loop {
        let lifts: Vec<Vec<Int>> = hard
            .iter()
            .enumerate()
            .map(|(h, &i)| {
                (0..m)
                    .map(|k| &a2[(i, k)] + &factors[i] * &digits[h * m + k])
                    .collect()
            })
            .collect();
        let mut gens = l0.basis().to_rows();
        gens.extend(lifts.iter().cloned());
        let (count, _) = IntLattice::min_generators_mod(&Matrix::from_rows(m, gens)?, top)?;
        if best.as_ref().is_none_or(|(c, _)| count < *c) {
            best = Some((count, lifts));
            if count == floor {
                break;
            }
        }
        // mixed-radix increment
        let mut k = 0;
        while k < digits.len() {
            digits[k] += 1;
            if digits[k] < radices[k] {
                break;
            }
            digits[k] = Int::zero();
            k += 1;
        }
        if k == digits.len() {
            break;
        }
    }
    Ok(best.expect("at least one combination").1)
}

/// `dc_G(H)` with the per-extension table and a witness overgroup.
pub fn dc_fatf(h: &FatfSubgroup, caps: &Caps) -> Result<DcGResult> {
    let (m, n) = h.ambient();
    let rh = h.reduced_rank();
    if h.words().is_empty() {
        return Ok(DcGResult {
            value: Rational::one(),
            witness: h.clone(),
            table: Vec::new(),
            trivial_projection: true,
        });
    }
    let b = h.lattice().basis().clone();
    let mut table = Vec::new();
    for j in algebraic_extensions(h.projection(), caps)? {
        let basis = extension_basis(h, &j);
        let u = u_matrix_over(h, &j, &basis)?;
        let certificate = d_abu(h.vectors(), &b, &u, caps)?;
        let witness =
            FatfSubgroup::from_basis(m, n, basis.clone(), &certificate.c, &certificate.lattice)?;
        table.push(DcRow {
            reduced_rank: j.reduced_rank(),
            extension: j,
            basis,
            u,
            certificate,
            witness,
        });
    }
    let best = table
        .iter()
        .min_by(|x, y| {
            x.denominator()
                .cmp(&y.denominator())
                .then_with(|| x.extension.cmp(&y.extension))
        })
        .expect("Hπ is its own algebraic extension");
    Ok(DcGResult {
        value: reduced_rank_ratio(rh, best.denominator()),
        witness: best.witness.clone(),
        table,
        trivial_projection: false,
    })
}

/// `K_N = ⟨t^{a_1 − b}u_1, t^{a_2}u_2, t^{N·b}⟩` with `b = b_{s+1}` from a
/// basis of `Z^m` adapted to `L_H`.
pub fn witness_kn(h: &FatfSubgroup, n_value: u64) -> Result<FatfSubgroup> {
    let (m, n) = h.ambient();
    if h.words().len() < 2 {
        return Err(Error::PreconditionViolated("K_N needs r(Hπ) ≥ 2".into()));
    }
    if h.lattice().index() != Index::Infinite {
        return Err(Error::PreconditionViolated(
            "K_N needs [Z^m : L_H] infinite".into(),
        ));
    }
    if n_value == 0 {
        return Err(Error::PreconditionViolated("K_N needs N ≥ 1".into()));
    }
    let adapted = h.lattice().complete_basis();
    let b = adapted.basis.row(h.lattice().rank()).to_vec();
    let a = h.vectors();
    let gens = [
        FatfElement::new(
            a.row(0).iter().zip(&b).map(|(x, y)| x - y).collect(),
            h.words()[0].clone(),
        ),
        FatfElement::new(a.row(1).to_vec(), h.words()[1].clone()),
        FatfElement::central(b.iter().map(|x| x * Int::from(n_value)).collect(), n),
    ];
    FatfSubgroup::from_generators(m, n, &gens)
}

/// `r̃(H ∩ K)` when the intersection is finitely generated and cheap to build.
fn bounded_intersection_rank(h: &FatfSubgroup, k: &FatfSubgroup) -> Result<Option<usize>> {
    let d = h.diagram(k)?;
    if d.meet_basis.len() >= 2 {
        match d.s.index() {
            Index::Infinite => return Ok(None),
            Index::Finite(l) if l > Int::from(SEARCH_INDEX_CAP) => return Ok(None),
            Index::Finite(_) => {}
        }
    }
    Ok(h.intersect(k)?.subgroup().map(FatfSubgroup::reduced_rank))
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Word {
    if n == 0 {
        return Word::identity(0);
    }
    let len = rng.gen_range(1..=max_len);
    let raw: Vec<Letter> = (0..len)
        .map(|_| Letter::new(rng.gen_range(0..n), rng.gen()))
        .collect();
    Word::reduce(n, raw).expect("letters in range")
}

fn random_vector(rng: &mut ChaCha8Rng, m: usize, bound: i64) -> Vec<Int> {
    (0..m)
        .map(|_| Int::from(rng.gen_range(-bound..=bound)))
        .collect()
}

fn random_subgroup(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<FatfSubgroup> {
    let count = rng.gen_range(1..=3);
    let mut gens: Vec<FatfElement> = (0..count)
        .map(|_| FatfElement::new(random_vector(rng, m, 2), random_word(rng, n, 4)))
        .collect();
    if m > 0 && rng.gen_bool(0.5) {
        gens.push(FatfElement::central(random_vector(rng, m, 3), n));
    }
    FatfSubgroup::from_generators(m, n, &gens)
}

fn lattice_variation(rng: &mut ChaCha8Rng, h: &FatfSubgroup) -> Result<FatfSubgroup> {
    let (m, n) = h.ambient();
    let a = h.vectors();
    let mut gens: Vec<FatfElement> = h
        .words()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let delta = random_vector(rng, m, 1);
            FatfElement::new(
                a.row(i).iter().zip(delta).map(|(x, y)| x + y).collect(),
                w.clone(),
            )
        })
        .collect();
    let scale = Int::from(rng.gen_range(1..=3));
    for i in 0..m {
        let mut v = vec![Int::zero(); m];
        v[i] = scale.clone();
        gens.push(FatfElement::central(v, n));
    }
    gens.push(FatfElement::central(random_vector(rng, m, 2), n));
    FatfSubgroup::from_generators(m, n, &gens)
}

/// Best `r̃(H ∩ K) / r̃(K)` over a deterministic candidate family, starting
/// from `K = H` with ratio 1. Cyclic `K` and non-finitely generated
/// intersections are skipped.
pub fn di_search(
    h: &FatfSubgroup,
    family: SearchFamily,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    let (m, n) = h.ambient();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SearchOutcome {
        ratio: Rational::one(),
        witness: h.clone(),
        intersection_rank: h.reduced_rank(),
        examined: 0,
        skipped: 0,
    };
    let kn_ok = h.words().len() >= 2 && h.lattice().index() == Index::Infinite;
    let mut candidates: Vec<FatfSubgroup> = Vec::new();
    if matches!(family, SearchFamily::Kn | SearchFamily::All) && kn_ok {
        for k in 1..=budget as u64 {
            candidates.push(witness_kn(h, k)?);
        }
    }
    if matches!(family, SearchFamily::LatticeVariations | SearchFamily::All)
        && !h.words().is_empty()
    {
        for _ in 0..budget {
            candidates.push(lattice_variation(&mut rng, h)?);
        }
    }
    if matches!(family, SearchFamily::Random | SearchFamily::All) {
        for _ in 0..budget {
            candidates.push(random_subgroup(&mut rng, m, n)?);
        }
    }
    for k in candidates {
        out.examined += 1;
        let rk = k.reduced_rank();
        if rk == 0 {
            out.skipped += 1;
            continue;
        }
        let Some(meet) = bounded_intersection_rank(h, &k)? else {
            out.skipped += 1;
            continue;
        };
        let ratio = Rational::new(Int::from(meet), Int::from(rk));
        if ratio > out.ratio {
            out.ratio = ratio;
            out.witness = k;
            out.intersection_rank = meet;
        }
    }
    Ok(out)
}

/// Classifies `di_G(H)`: exact in the first two cases, a bracket otherwise.
///
/// `free_bound` is an upper bound for `di_{F_n}(Hπ)`; `r̃(Hπ)` is used if absent.
pub fn di_classify(
    h: &FatfSubgroup,
    budget: usize,
    seed: u64,
    free_bound: Option<Rational>,
    caps: &Caps,
) -> Result<DiReport> {
    let one = Rational::one();
    if h.words().len() <= 1 {
        return Ok(DiReport {
            case: DiCase::ProjectionSmall,
            value: Some(DiValue::Finite(one.clone())),
            lower: one.clone(),
            upper: Some(one),
            index: None,
            dc: None,
            witness: None,
        });
    }
    match h.lattice().index() {
        Index::Infinite => {
            let k = witness_kn(h, budget.max(1) as u64)?;
            let meet = h
                .intersect(&k)?
                .subgroup()
                .map(FatfSubgroup::reduced_rank)
                .ok_or_else(|| {
                    Error::PreconditionViolated("H ∩ K_N not finitely generated".into())
                })?;
            Ok(DiReport {
                case: DiCase::InfiniteIndexCenter,
                value: Some(DiValue::Infinite),
                lower: Rational::new(Int::from(meet), Int::from(k.reduced_rank())),
                upper: None,
                index: None,
                dc: None,
                witness: Some((k, meet)),
            })
        }
        Index::Finite(index) => {
            let dc = dc_fatf(h, caps)?.value;
            let found = di_search(h, SearchFamily::All, budget, seed)?;
            let bound = free_bound.unwrap_or_else(|| {
                Rational::from_integer(Int::from(h.projection().reduced_rank()))
            });
            let upper = Rational::from_integer(index.clone()) * bound;
            let lower = dc.clone().max(found.ratio.clone()).max(one);
            Ok(DiReport {
                case: DiCase::FiniteIndexCenter,
                value: None,
                lower,
                upper: Some(upper),
                index: Some(index),
                dc: Some(dc),
                witness: Some((found.witness, found.intersection_rank)),
            })
        }
    }
}

/// For positive `a, b, c, d` with `a/b ≤ c/d`: `a/b ≤ (a+c)/(b+d) ≤ c/d`.
pub fn mediant_check(a: &Int, b: &Int, c: &Int, d: &Int) -> bool {
    let x = Rational::new(a.clone(), b.clone());
    let y = Rational::new(c.clone(), d.clone());
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let mid = Rational::new(a + c, b + d);
    lo <= mid && mid <= hi
}

/// `min_C r(row(B) + row(A − U·C))` over `C` with entries in `range`.
#[doc(hidden)]
pub fn d_abu_brute_force(
    a: &IntMatrix,
    b: &IntMatrix,
    u: &IntMatrix,
    range: std::ops::Range<i64>,
) -> usize {
    let (p, m) = (u.cols(), a.cols());
    let cells = p * m;
    let width = (range.end - range.start) as usize;
    let mut best = usize::MAX;
    let total = width.checked_pow(cells as u32).expect("small search space");
    for mut code in 0..total {
        let mut c = Matrix::zeros(p, m);
        for cell in 0..cells {
            c[(cell / m, cell % m)] = Int::from(range.start + (code % width) as i64);
            code /= width;
        }
        let uc = u.mul(&c).expect("shapes agree");
        let mut rows = b.to_rows();
        for i in 0..a.rows() {
            rows.push(a.row(i).iter().zip(uc.row(i)).map(|(x, y)| x - y).collect());
        }
        let rank = hnf(&Matrix::from_rows(m, rows).expect("shapes agree")).rank();
        best = best.min(rank);
    }
    best
}
