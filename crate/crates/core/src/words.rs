//! Alphabets, freely reduced words and abelianization.
//!
//! Letters are ordered `a < a⁻¹ < b < b⁻¹ < …`; this order drives every
//! deterministic scan in the crate (BFS numbering, shortlex comparisons).
//! In text, `a⁻¹` is written `A`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::{Error, IntScalar, Result};

const DEFAULT_NAMES: &str = "abcdefghijklmnopqrstuvwxyz";

/// A finite alphabet of single-character generator names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<char>,
}

impl Alphabet {
    /// The first `rank` lowercase letters.
    pub fn new(rank: usize) -> Result<Self> {
        if rank > DEFAULT_NAMES.len() {
            return Err(Error::LetterOutOfRange {
                index: rank,
                rank: DEFAULT_NAMES.len(),
            });
        }
        Ok(Alphabet {
            names: DEFAULT_NAMES.chars().take(rank).collect(),
        })
    }

    /// Custom names; they must be distinct lowercase ASCII letters.
    pub fn with_names(names: &str) -> Result<Self> {
        let names: Vec<char> = names.chars().collect();
        for (i, c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() || names[..i].contains(c) {
                return Err(Error::PreconditionViolated(format!(
                    "invalid or repeated letter name {c:?}"
                )));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, index: usize) -> char {
        self.names[index]
    }

    /// Looks up a character: lowercase is the generator, uppercase its inverse.
    pub fn letter_of(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let index = self.names.iter().position(|&n| n == lower)?;
        Some(Letter::new(index, c.is_ascii_uppercase()))
    }

    pub fn render(&self, w: &Word) -> String {
        w.letters()
            .iter()
            .map(|l| {
                let c = self.names[l.index()];
                if l.is_inverse() {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }
}

/// A generator or the inverse of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: usize,
    inverse: bool,
}

impl Letter {
    pub const fn new(index: usize, inverse: bool) -> Self {
        Letter { index, inverse }
    }

    pub const fn gen(index: usize) -> Self {
        Letter::new(index, false)
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inv(self) -> Self {
        Letter::new(self.index, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Position in the order `a, A, b, B, …` (used as a direction index).
    pub fn code(self) -> usize {
        2 * self.index + self.inverse as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter::new(code / 2, code % 2 == 1)
    }
}

/// A freely reduced word over an alphabet of a given rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn letter(rank: usize, l: Letter) -> Result<Self> {
        Word::reduce(rank, [l])
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce(rank: usize, raw: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if l.index >= rank {
                return Err(Error::LetterOutOfRange {
                    index: l.index,
                    rank,
                });
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank, letters })
    }

    /// Parses a plain letter string such as `"abA"` over the default names.
    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        let alphabet = Alphabet::new(rank)?;
        let mut raw = Vec::with_capacity(s.len());
        for c in s.chars() {
            let l = alphabet
                .letter_of(c)
                .ok_or_else(|| Error::PreconditionViolated(format!("unknown letter {c:?}")))?;
            raw.push(l);
        }
        Word::reduce(rank, raw)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Result<Word> {
        g.inverse().multiply(self)?.multiply(g)
    }

    /// Exponent-sum vector: entry `j` is the signed count of letter `j`.
    pub fn exponent_sums<T: IntScalar>(&self) -> Vec<T> {
        let mut sums = vec![0i64; self.rank];
        for l in &self.letters {
            sums[l.index] += l.sign();
        }
        sums.into_iter().map(T::from_i64_exact).collect()
    }

    /// Applies the homomorphism sending letter `j` to `images[j]`, a word of
    /// rank `target`.
    pub fn substitute(&self, images: &[Word], target: usize) -> Result<Word> {
        if images.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: images.len(),
            });
        }
        let mut letters = Vec::new();
        for l in &self.letters {
            let img = &images[l.index];
            if img.rank != target {
                return Err(Error::AlphabetMismatch {
                    left: target,
                    right: img.rank,
                });
            }
            if l.inverse {
                for &x in img.letters.iter().rev() {
                    push_reduced(&mut letters, x.inv());
                }
            } else {
                for &x in &img.letters {
                    push_reduced(&mut letters, x);
                }
            }
        }
        Ok(Word {
            rank: target,
            letters,
        })
    }

    /// Shortlex order with letters ordered `a < A < b < B < …`.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }

    /// Whichever of `self` and `self⁻¹` is shortlex-smaller.
    pub fn oriented(&self) -> (Word, bool) {
        let inv = self.inverse();
        if inv.shortlex_cmp(self) == Ordering::Less {
            (inv, true)
        } else {
            (self.clone(), false)
        }
    }
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last() == Some(&l.inv()) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

impl Mul for &Word {
    type Output = Word;

    /// Panics on rank mismatch; use [`Word::multiply`] for a checked product.
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
            .expect("multiplying words of different ranks")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            if l.index < DEFAULT_NAMES.len() {
                let c = DEFAULT_NAMES.as_bytes()[l.index] as char;
                let c = if l.inverse { c.to_ascii_uppercase() } else { c };
                write!(f, "{c}")?;
            } else if l.inverse {
                write!(f, "X{}", l.index)?;
            } else {
                write!(f, "x{}", l.index)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn cancellation() {
        assert!(w(1, "aA").is_identity());
        assert_eq!(w(2, "abBa"), w(2, "aa"));
        let fixed = w(3, "baC");
        assert_eq!(fixed.len(), 3);
        assert_eq!(fixed.to_string(), "baC");
    }

    #[test]
    fn letter_out_of_range() {
        let err = Word::reduce(2, [Letter::gen(0), Letter::gen(2)]).unwrap_err();
        assert_eq!(err, Error::LetterOutOfRange { index: 2, rank: 2 });
    }

    #[test]
    fn products() {
        assert_eq!(w(2, "ab").multiply(&w(2, "B")).unwrap(), w(2, "a"));
        assert_eq!(
            Word::identity(2).multiply(&w(2, "abA")).unwrap(),
            w(2, "abA")
        );
        assert_eq!(w(2, "bb").multiply(&w(2, "Ba")).unwrap(), w(2, "ba"));
        assert!(matches!(
            w(2, "a").multiply(&w(3, "a")),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(w(2, "abA").exponent_sums::<i64>(), vec![0, 1]);
        assert_eq!(w(2, "ab").exponent_sums::<i64>(), vec![1, 1]);
        assert_eq!(w(2, "aa").exponent_sums::<i64>(), vec![2, 0]);
    }

    #[test]
    fn substitution_and_orientation() {
        let images = [w(3, "b"), w(3, "aC")];
        assert_eq!(w(2, "ab").substitute(&images, 3).unwrap(), w(3, "baC"));
        assert_eq!(w(2, "B").substitute(&images, 3).unwrap(), w(3, "cA"));
        assert_eq!(w(3, "cA").oriented(), (w(3, "aC"), true));
        assert_eq!(w(2, "b").oriented(), (w(2, "b"), false));
        assert_eq!(w(2, "ab").pow(-2), w(2, "BABA"));
        assert_eq!(w(2, "a").conjugate(&w(2, "b")).unwrap(), w(2, "Bab"));
    }

    #[test]
    fn alphabet_names() {
        let alpha = Alphabet::new(3).unwrap();
        assert_eq!(alpha.letter_of('C'), Some(Letter::new(2, true)));
        assert_eq!(alpha.letter_of('d'), None);
        assert!(Alphabet::with_names("xyx").is_err());
        assert_eq!(
            Alphabet::with_names("xy").unwrap().render(&w(2, "aB")),
            "xY"
        );
    }

    fn raw_letters(rank: usize, max: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0..rank, any::<bool>()), 0..max)
            .prop_map(|v| v.into_iter().map(|(i, inv)| Letter::new(i, inv)).collect())
    }

    proptest! {
        #[test]
        fn reduce_idempotent(raw in raw_letters(3, 20)) {
            let once = Word::reduce(3, raw).unwrap();
            let twice = Word::reduce(3, once.letters().to_vec()).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn multiply_associative(x in raw_letters(3, 10), y in raw_letters(3, 10), z in raw_letters(3, 10)) {
            let (u, v, t) = (Word::reduce(3, x).unwrap(), Word::reduce(3, y).unwrap(), Word::reduce(3, z).unwrap());
            prop_assert_eq!(&u * &(&v * &t), &(&u * &v) * &t);
            prop_assert!((&u * &u.inverse()).is_identity());
        }

        #[test]
        fn exponent_sums_are_a_morphism(x in raw_letters(3, 12), y in raw_letters(3, 12)) {
            let (u, v) = (Word::reduce(3, x).unwrap(), Word::reduce(3, y).unwrap());
            let sum: Vec<i64> = u.exponent_sums::<i64>().iter().zip(v.exponent_sums::<i64>()).map(|(a, b)| a + b).collect();
            prop_assert_eq!((&u * &v).exponent_sums::<i64>(), sum);
        }
    }
}
