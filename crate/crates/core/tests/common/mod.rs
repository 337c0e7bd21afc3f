#![allow(dead_code)]

use fatf_core::intlinalg::Matrix;
use fatf_core::{
    FatfElement, FatfSubgroup, Int, IntMatrix, Letter, StallingsGraph, VertexPartition, Word,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn word(n: usize, s: &str) -> Word {
    Word::parse(n, s).unwrap()
}

pub fn graph(n: usize, gens: &[&str]) -> StallingsGraph {
    let gens: Vec<Word> = gens.iter().map(|s| word(n, s)).collect();
    StallingsGraph::build(n, &gens).unwrap()
}

pub fn element(v: &[i64], n: usize, w: &str) -> FatfElement {
    FatfElement::new(v.iter().map(|&x| Int::from(x)).collect(), word(n, w))
}

pub fn subgroup(m: usize, n: usize, gens: &[(&[i64], &str)]) -> FatfSubgroup {
    let gens: Vec<FatfElement> = gens.iter().map(|(v, w)| element(v, n, w)).collect();
    FatfSubgroup::from_generators(m, n, &gens).unwrap()
}

pub fn mat(rows: &[&[i64]], cols: usize) -> IntMatrix {
    IntMatrix::from_i64_rows(rows, cols)
}

pub fn random_word(rng: &mut ChaCha8Rng, n: usize, min_len: usize, max_len: usize) -> Word {
    loop {
        let len = rng.gen_range(min_len..=max_len);
        let raw: Vec<Letter> = (0..len)
            .map(|_| Letter::new(rng.gen_range(0..n), rng.gen()))
            .collect();
        let w = Word::reduce(n, raw).unwrap();
        if w.len() >= min_len {
            return w;
        }
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, gens: usize, max_len: usize) -> StallingsGraph {
    let words: Vec<Word> = (0..gens).map(|_| random_word(rng, n, 1, max_len)).collect();
    StallingsGraph::build(n, &words).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, m: usize, bound: i64) -> Vec<Int> {
    (0..m)
        .map(|_| Int::from(rng.gen_range(-bound..=bound)))
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows).map(|_| random_vector(rng, cols, bound)).collect();
    Matrix::from_rows(cols, data).unwrap()
}

/// Random subgroup of `Z^m × F_n` from `words` random elements and `central` pure vectors.
pub fn random_fatf(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    words: usize,
    max_len: usize,
    central: usize,
) -> FatfSubgroup {
    let mut gens: Vec<FatfElement> = (0..words)
        .map(|_| FatfElement::new(random_vector(rng, m, 2), random_word(rng, n, 1, max_len)))
        .collect();
    gens.extend((0..central).map(|_| FatfElement::central(random_vector(rng, m, 3), n)));
    FatfSubgroup::from_generators(m, n, &gens).unwrap()
}

/// Product of `k` elementary row operations applied to the identity.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, k: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..k {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = Int::from(rng.gen_range(-2..=2));
        let mut e = IntMatrix::identity(n);
        let rows: Vec<Vec<Int>> = (0..n)
            .map(|r| {
                let mut row = e.row(r).to_vec();
                if r == i {
                    row[j] = c.clone();
                }
                row
            })
            .collect();
        e = Matrix::from_rows(n, rows).unwrap();
        u = e.mul(&u).unwrap();
    }
    u
}

/// Every set partition of `0..n`, as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=max + 1 {
            prefix.push(b);
            go(prefix, n, max.max(b), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        go(&mut vec![0], n, 0, &mut out);
    }
    out
}

/// All quotients of `g` under arbitrary vertex identifications.
pub fn brute_fringe(g: &StallingsGraph) -> BTreeSet<StallingsGraph> {
    set_partitions(g.vertex_count())
        .into_iter()
        .map(|labels| g.quotient(&VertexPartition::from_labels(labels)).unwrap())
        .collect()
}
