//! Whitehead automorphisms and the free-factor test by edge-count descent.
//!
//! A subgroup `H ≤ F_q` of rank `k` is a free factor iff some automorphism
//! carries the cyclic core of its Stallings graph to a bouquet of `k` loops.
//! Peak reduction guarantees that, away from the minimum, some type-II
//! Whitehead automorphism strictly shrinks the core, so greedy descent
//! reaches the minimal core size of the automorphic orbit.

use crate::words::{Letter, Word};
use crate::{Error, Result, StallingsGraph};

/// Type-II Whitehead automorphism `(A, x)`: every letter `y ∉ {x, x⁻¹}` maps to
/// `x⁻¹·y·x`, `y·x`, `x⁻¹·y` or `y` according to whether `y` and `y⁻¹` lie in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadMap {
    rank: usize,
    multiplier: Letter,
    /// `cut[code]` for every letter code; always contains the multiplier.
    cut: Vec<bool>,
}

impl WhiteheadMap {
    /// `cut` lists the letters of `A` other than the multiplier.
    pub fn new(rank: usize, multiplier: Letter, cut: &[Letter]) -> Result<Self> {
        if multiplier.index() >= rank {
            return Err(Error::LetterOutOfRange {
                index: multiplier.index(),
                rank,
            });
        }
        let mut set = vec![false; 2 * rank];
        set[multiplier.code()] = true;
        for &l in cut {
            if l.index() >= rank {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank,
                });
            }
            if l == multiplier.inv() {
                return Err(Error::PreconditionViolated(
                    "the cut set cannot contain the inverse of the multiplier".into(),
                ));
            }
            set[l.code()] = true;
        }
        Ok(WhiteheadMap {
            rank,
            multiplier,
            cut: set,
        })
    }

    pub fn multiplier(&self) -> Letter {
        self.multiplier
    }

    fn image(&self, y: Letter) -> Vec<Letter> {
        let x = self.multiplier;
        if y.index() == x.index() {
            return vec![y];
        }
        let positive = Letter::gen(y.index());
        let mut out = Vec::with_capacity(3);
        if self.cut[positive.inv().code()] {
            out.push(x.inv());
        }
        out.push(positive);
        if self.cut[positive.code()] {
            out.push(x);
        }
        if y.is_inverse() {
            out.reverse();
            out.iter_mut().for_each(|l| *l = l.inv());
        }
        out
    }

    pub fn apply(&self, w: &Word) -> Word {
        assert_eq!(w.rank(), self.rank, "word and map over different alphabets");
        let raw: Vec<Letter> = w.letters().iter().flat_map(|&l| self.image(l)).collect();
        Word::reduce(self.rank, raw).expect("letters in range")
    }

    /// `(A − x + x⁻¹, x⁻¹)`.
    pub fn inverse(&self) -> WhiteheadMap {
        let mut cut = self.cut.clone();
        cut[self.multiplier.code()] = false;
        cut[self.multiplier.inv().code()] = true;
        WhiteheadMap {
            rank: self.rank,
            multiplier: self.multiplier.inv(),
            cut,
        }
    }

    /// Every type-II map on `F_rank`, multipliers by letter index then sign,
    /// cut sets in binary order over the remaining `2(rank − 1)` letters.
    pub fn all(rank: usize) -> impl Iterator<Item = WhiteheadMap> {
        (0..2 * rank).flat_map(move |code| {
            let x = Letter::from_code(code);
            let others: Vec<Letter> = (0..2 * rank)
                .map(Letter::from_code)
                .filter(|l| l.index() != x.index())
                .collect();
            let subsets = 1u64 << others.len();
            (0..subsets).map(move |mask| {
                let cut: Vec<Letter> = others
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &l)| l)
                    .collect();
                WhiteheadMap::new(rank, x, &cut).expect("valid by construction")
            })
        })
    }
}

/// Number of edges in the cyclic core.
pub fn core_size(g: &StallingsGraph) -> usize {
    g.cyclic_core().map_or(0, |c| c.edge_count())
}

/// Outcome of [`descend`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    /// Graph of an automorphic image of a conjugate of the input, at a local
    /// (hence global) minimum of the core size.
    pub minimum: StallingsGraph,
    pub core_size: usize,
    pub steps: usize,
}

/// Greedy Whitehead descent on the cyclic-core edge count of `⟨gens⟩ ≤ F_rank`.
pub fn descend(rank: usize, gens: &[Word], max_steps: usize) -> Result<Descent> {
    let start = StallingsGraph::build(rank, gens)?;
    let Some(mut current) = start.cyclic_core() else {
        return Ok(Descent {
            minimum: start,
            core_size: 0,
            steps: 0,
        });
    };
    let target = current.subgroup_rank();
    let mut size = current.edge_count();
    let mut steps = 0;
    'descent: while size > target {
        let basis = current.basis();
        for map in WhiteheadMap::all(rank) {
            let image: Vec<Word> = basis.iter().map(|w| map.apply(w)).collect();
            let g = StallingsGraph::build(rank, &image)?;
            let core = g.cyclic_core().expect("automorphisms preserve rank");
            if core.edge_count() < size {
                steps += 1;
                if steps > max_steps {
                    return Err(Error::DescentCapExceeded { cap: max_steps });
                }
                size = core.edge_count();
                current = core;
                continue 'descent;
            }
        }
        break;
    }
    Ok(Descent {
        minimum: current,
        core_size: size,
        steps,
    })
}

/// True iff `⟨gens⟩` (given by a free basis) is a free factor of `F_rank`.
pub fn is_free_factor_of_ambient(rank: usize, basis: &[Word], max_steps: usize) -> Result<bool> {
    let k = basis.len();
    if k == 0 {
        return Ok(true);
    }
    let d = descend(rank, basis, max_steps)?;
    Ok(d.core_size == k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn map_images() {
        // A = {a, b}: b ↦ ba, B ↦ AB
        let m = WhiteheadMap::new(2, Letter::gen(0), &[Letter::gen(1)]).unwrap();
        assert_eq!(m.apply(&w(2, "b")), w(2, "ba"));
        assert_eq!(m.apply(&w(2, "B")), w(2, "AB"));
        assert_eq!(m.apply(&w(2, "a")), w(2, "a"));
        // A = {a, b, B}: b ↦ Aba
        let c =
            WhiteheadMap::new(2, Letter::gen(0), &[Letter::gen(1), Letter::gen(1).inv()]).unwrap();
        assert_eq!(c.apply(&w(2, "b")), w(2, "Aba"));
        assert!(WhiteheadMap::new(2, Letter::gen(0), &[Letter::gen(0).inv()]).is_err());
    }

    #[test]
    fn map_count() {
        assert_eq!(WhiteheadMap::all(2).count(), 4 * 4);
        assert_eq!(WhiteheadMap::all(3).count(), 6 * 16);
    }

    #[test]
    fn free_factor_examples() {
        assert!(is_free_factor_of_ambient(2, &[w(2, "a")], 100).unwrap());
        assert!(is_free_factor_of_ambient(2, &[w(2, "aab")], 100).unwrap());
        assert!(is_free_factor_of_ambient(3, &[w(3, "b"), w(3, "aC")], 100).unwrap());
        assert!(!is_free_factor_of_ambient(2, &[w(2, "aa")], 100).unwrap());
        assert!(!is_free_factor_of_ambient(2, &[w(2, "abAB")], 100).unwrap());
        assert!(!is_free_factor_of_ambient(3, &[w(3, "aabb")], 100).unwrap());
        assert!(is_free_factor_of_ambient(2, &[], 100).unwrap());
    }

    /// A basis letter pushed through random automorphisms stays a free factor.
    #[test]
    fn images_of_basis_letters_are_free_factors() {
        let maps: Vec<WhiteheadMap> = WhiteheadMap::all(3).collect();
        let mut seed = 17usize;
        for trial in 0..30 {
            let mut gens = vec![w(3, "a"), w(3, "c")];
            gens.truncate(1 + trial % 2);
            for _ in 0..4 {
                seed = seed
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let m = &maps[(seed >> 33) % maps.len()];
                gens = gens.iter().map(|g| m.apply(g)).collect();
            }
            assert!(
                is_free_factor_of_ambient(3, &gens, 1000).unwrap(),
                "{gens:?}"
            );
        }
    }

    #[test]
    fn descent_cap() {
        let gens = [w(2, "abb")];
        assert_eq!(
            descend(2, &gens, 0),
            Err(Error::DescentCapExceeded { cap: 0 })
        );
    }

    fn word_strategy(rank: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..rank, any::<bool>()), 0..12).prop_map(move |raw| {
            Word::reduce(rank, raw.into_iter().map(|(i, s)| Letter::new(i, s))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn inverse_undoes_the_map(idx in 0usize..96, ws in prop::collection::vec(word_strategy(3), 100)) {
            let m = WhiteheadMap::all(3).nth(idx).unwrap();
            let inv = m.inverse();
            for x in &ws {
                prop_assert_eq!(&inv.apply(&m.apply(x)), x);
                prop_assert_eq!(&m.apply(&inv.apply(x)), x);
            }
        }

        #[test]
        fn maps_preserve_rank_and_index(idx in 0usize..96, gens in prop::collection::vec(word_strategy(3), 1..4)) {
            let m = WhiteheadMap::all(3).nth(idx).unwrap();
            let h = StallingsGraph::build(3, &gens).unwrap();
            let image: Vec<Word> = h.basis().iter().map(|x| m.apply(x)).collect();
            let g = StallingsGraph::build(3, &image).unwrap();
            prop_assert_eq!(g.subgroup_rank(), h.subgroup_rank());
            prop_assert_eq!(g.index(), h.index());
        }
    }
}
