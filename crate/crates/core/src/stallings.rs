//! Stallings graphs of finitely generated subgroups of `F_n`.
//!
//! A [`StallingsGraph`] is always stored folded, cored at its basepoint and
//! canonically numbered: the basepoint is vertex 0 and the remaining
//! vertices are numbered in BFS discovery order, scanning directions in the
//! order `a, a⁻¹, b, b⁻¹, …`. Folded based graphs have at most one
//! basepoint-preserving label isomorphism, so two graphs describe the same
//! subgroup iff they compare equal.

use std::collections::VecDeque;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::words::{Letter, Word};
use crate::{Error, Index, Int, IntLattice, Result};

/// Folded, cored, canonically numbered Stallings graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StallingsGraph {
    rank: usize,
    vertices: usize,
    /// `out[v * rank + l]`: target of the `l`-edge leaving `v`.
    out: Vec<Option<u32>>,
    /// `inc[v * rank + l]`: source of the `l`-edge entering `v`.
    inc: Vec<Option<u32>>,
}

/// A partition of the vertex set of a graph, stored as a block label per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    labels: Vec<usize>,
}

impl VertexPartition {
    /// Builds a partition from explicit blocks.
    pub fn from_blocks(vertex_count: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; vertex_count];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::PreconditionViolated("empty block".into()));
            }
            for &v in block {
                if v >= vertex_count || labels[v] != usize::MAX {
                    return Err(Error::PreconditionViolated(format!(
                        "vertex {v} is out of range or in two blocks"
                    )));
                }
                labels[v] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::PreconditionViolated(
                "blocks do not cover every vertex".into(),
            ));
        }
        Ok(VertexPartition { labels })
    }

    /// Arbitrary block labels, one per vertex.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        VertexPartition { labels }
    }

    pub fn identity(vertex_count: usize) -> Self {
        VertexPartition {
            labels: (0..vertex_count).collect(),
        }
    }

    pub fn whole(vertex_count: usize) -> Self {
        VertexPartition {
            labels: vec![0; vertex_count],
        }
    }

    /// The partition whose only non-singleton block is `{a, b}`.
    pub fn pair(vertex_count: usize, a: usize, b: usize) -> Self {
        let mut labels: Vec<usize> = (0..vertex_count).collect();
        labels[b] = a;
        VertexPartition { labels }
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Spanning-tree data for reading bases and rewriting.
#[derive(Clone, Debug)]
struct Tree {
    /// Word read along the tree from the basepoint to each vertex.
    spine: Vec<Word>,
    /// For each `(v, l)` positive edge: `Some((basis index, flipped))` when the
    /// edge is outside the tree.
    generator: Vec<Option<(usize, bool)>>,
    basis: Vec<Word>,
}

impl StallingsGraph {
    /// The one-vertex graph of the trivial subgroup.
    pub fn trivial(rank: usize) -> Self {
        StallingsGraph {
            rank,
            vertices: 1,
            out: vec![None; rank],
            inc: vec![None; rank],
        }
    }

    /// The bouquet of all letters: the whole free group.
    pub fn bouquet(rank: usize) -> Self {
        StallingsGraph {
            rank,
            vertices: 1,
            out: vec![Some(0); rank],
            inc: vec![Some(0); rank],
        }
    }

    /// Stallings graph of the subgroup generated by `gens`.
    pub fn build(rank: usize, gens: &[Word]) -> Result<Self> {
        let mut vertex_count = 1;
        let mut edges = Vec::new();
        for g in gens {
            if g.rank() != rank {
                return Err(Error::AlphabetMismatch {
                    left: rank,
                    right: g.rank(),
                });
            }
            petal(g, 0, 0, &mut vertex_count, &mut edges);
        }
        Ok(Self::fold(rank, vertex_count, 0, &edges))
    }

    /// Folds an arbitrary based labelled graph given as `(source, letter, target)`
    /// triples, then cores it at the basepoint.
    pub fn fold(
        rank: usize,
        vertex_count: usize,
        base: usize,
        edges: &[(usize, usize, usize)],
    ) -> Self {
        let mut folder = Folder::new(rank, vertex_count);
        for &(s, l, t) in edges {
            folder.add_edge(s, l, t);
        }
        let base = folder.find(base);
        let (mut adj, base) = folder.compact(base);
        adj.prune(Some(base));
        adj.canonical(base)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().filter(|e| e.is_some()).count()
    }

    /// Rank of the subgroup, `E − V + 1`.
    pub fn subgroup_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertices
    }

    /// `max(0, rank − 1)`.
    pub fn reduced_rank(&self) -> usize {
        self.subgroup_rank().saturating_sub(1)
    }

    /// Always the identity: graphs are stored canonically.
    pub fn canonical_form(&self) -> StallingsGraph {
        self.clone()
    }

    /// Endpoint of the edge read by `l` from `v`, if any.
    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        let slot = v * self.rank + l.index();
        let e = if l.is_inverse() {
            self.inc[slot]
        } else {
            self.out[slot]
        };
        e.map(|t| t as usize)
    }

    /// Positive edges `(source, letter index, target)` in `(source, letter)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.out.iter().enumerate().filter_map(move |(slot, t)| {
            t.map(|t| (slot / self.rank, slot % self.rank, t as usize))
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        let row = v * self.rank..(v + 1) * self.rank;
        self.out[row.clone()].iter().filter(|e| e.is_some()).count()
            + self.inc[row].iter().filter(|e| e.is_some()).count()
    }

    /// Reads `w` from `v`, returning the endpoint if the path exists.
    pub fn trace_from(&self, v: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(v, |v, &l| self.step(v, l))
    }

    pub fn contains(&self, g: &Word) -> bool {
        assert_eq!(
            g.rank(),
            self.rank,
            "word and graph over different alphabets"
        );
        self.trace_from(0, g) == Some(0)
    }

    /// True when every vertex has all `2n` directions.
    pub fn is_complete(&self) -> bool {
        self.out.iter().chain(&self.inc).all(Option::is_some)
    }

    /// Index of the subgroup in `F_n`.
    pub fn index(&self) -> Index<usize> {
        if self.is_complete() {
            Index::Finite(self.vertices)
        } else {
            Index::Infinite
        }
    }

    /// True when `self` describes a subgroup of the one described by `other`.
    pub fn is_subgroup_of(&self, other: &StallingsGraph) -> bool {
        self.rank == other.rank && self.basis().iter().all(|w| other.contains(w))
    }

    fn tree(&self) -> Tree {
        let mut spine: Vec<Option<Word>> = vec![None; self.vertices];
        let mut in_tree = vec![false; self.out.len()];
        spine[0] = Some(Word::identity(self.rank));
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for code in 0..2 * self.rank {
                let l = Letter::from_code(code);
                if let Some(t) = self.step(v, l) {
                    if spine[t].is_none() {
                        let w = spine[v].as_ref().unwrap() * &Word::letter(self.rank, l).unwrap();
                        spine[t] = Some(w);
                        let slot = if l.is_inverse() {
                            t * self.rank + l.index()
                        } else {
                            v * self.rank + l.index()
                        };
                        in_tree[slot] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        let spine: Vec<Word> = spine.into_iter().map(Option::unwrap).collect();
        let mut generator = vec![None; self.out.len()];
        let mut basis = Vec::new();
        for (s, l, t) in self.edges() {
            let slot = s * self.rank + l;
            if in_tree[slot] {
                continue;
            }
            let w = &(&spine[s] * &Word::letter(self.rank, Letter::gen(l)).unwrap())
                * &spine[t].inverse();
            let (w, flipped) = w.oriented();
            generator[slot] = Some((basis.len(), flipped));
            basis.push(w);
        }
        Tree {
            spine,
            generator,
            basis,
        }
    }

    /// Free basis read off the BFS spanning tree, one word per non-tree edge.
    /// Each word is replaced by its inverse when that is shortlex-smaller.
    pub fn basis(&self) -> Vec<Word> {
        self.tree().basis
    }

    /// Expresses `g` as a word over [`Self::basis`].
    pub fn rewrite(&self, g: &Word) -> Result<Word> {
        let tree = self.tree();
        self.rewrite_with(&tree, g)
    }

    fn rewrite_with(&self, tree: &Tree, g: &Word) -> Result<Word> {
        let mut v = 0;
        let mut raw = Vec::new();
        for &l in g.letters() {
            let t = self.step(v, l).ok_or(Error::NotMember)?;
            let slot = if l.is_inverse() {
                t * self.rank + l.index()
            } else {
                v * self.rank + l.index()
            };
            if let Some((j, flipped)) = tree.generator[slot] {
                raw.push(Letter::new(j, flipped != l.is_inverse()));
            }
            v = t;
        }
        if v != 0 {
            return Err(Error::NotMember);
        }
        Word::reduce(tree.basis.len(), raw)
    }

    /// Rewrites several words against one spanning tree.
    pub fn rewrite_all(&self, words: &[Word]) -> Result<Vec<Word>> {
        let tree = self.tree();
        words.iter().map(|g| self.rewrite_with(&tree, g)).collect()
    }

    /// Word read along the spanning tree from the basepoint to `v`.
    pub fn spine(&self, v: usize) -> Word {
        self.tree().spine.swap_remove(v)
    }

    /// Graph of `g⁻¹ H g`.
    pub fn conjugate(&self, g: &Word) -> StallingsGraph {
        let gens: Vec<Word> = self
            .basis()
            .iter()
            .map(|w| w.conjugate(g).expect("same rank"))
            .collect();
        StallingsGraph::build(self.rank, &gens).expect("same rank")
    }

    /// Graph of `H ∩ K`: the basepoint component of the product graph, cored.
    pub fn intersect(&self, other: &StallingsGraph) -> Result<StallingsGraph> {
        self.check_rank(other)?;
        let (adj, _) = self.product(other);
        let mut adj = adj;
        adj.prune(Some(0));
        Ok(adj.canonical(0))
    }

    /// Every component of the full product graph with non-empty cyclic core,
    /// paired with its reduced rank.
    pub fn pullback_components(
        &self,
        other: &StallingsGraph,
    ) -> Result<Vec<(StallingsGraph, usize)>> {
        self.check_rank(other)?;
        let (mut adj, _) = self.product(other);
        adj.prune(None);
        let mut out = Vec::new();
        let mut seen = vec![false; adj.dirs.len()];
        for start in 0..adj.dirs.len() {
            if !adj.alive[start] || seen[start] {
                continue;
            }
            let component = adj.component(start);
            for &v in &component {
                seen[v] = true;
            }
            let g = adj.canonical(start);
            let r = g.reduced_rank();
            out.push((g, r));
        }
        Ok(out)
    }

    fn product(&self, other: &StallingsGraph) -> (Adjacency, usize) {
        let width = other.vertices;
        let count = self.vertices * width;
        let mut adj = Adjacency::new(self.rank, count);
        for (s, l, t) in self.edges() {
            for j in 0..width {
                if let Some(j2) = other.out[j * other.rank + l] {
                    let a = s * width + j;
                    let b = t * width + j2 as usize;
                    adj.dirs[a][2 * l] = Some(b);
                    adj.dirs[b][2 * l + 1] = Some(a);
                }
            }
        }
        (adj, count)
    }

    /// Identifies vertices according to `partition`, then folds.
    pub fn quotient(&self, partition: &VertexPartition) -> Result<StallingsGraph> {
        if partition.len() != self.vertices {
            return Err(Error::DimensionMismatch {
                expected: self.vertices,
                found: partition.len(),
            });
        }
        let labels: Vec<usize> = (0..self.vertices).map(|v| partition.label(v)).collect();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let edges: Vec<_> = self
            .edges()
            .map(|(s, l, t)| (labels[s], l, labels[t]))
            .collect();
        Ok(Self::fold(self.rank, count, labels[0], &edges))
    }

    /// Identifies the two vertices `a` and `b`, then folds.
    pub fn identify(&self, a: usize, b: usize) -> StallingsGraph {
        let mut folder = Folder::new(self.rank, self.vertices);
        for (s, l, t) in self.edges() {
            folder.add_edge(s, l, t);
        }
        folder.merge_now(a, b);
        let base = folder.find(0);
        let (mut adj, base) = folder.compact(base);
        adj.prune(Some(base));
        adj.canonical(base)
    }

    /// The cyclic core (hair at the basepoint removed), rebased at its
    /// smallest surviving vertex. This is the graph of a conjugate subgroup.
    /// Returns `None` for subgroups of rank 0.
    pub fn cyclic_core(&self) -> Option<StallingsGraph> {
        let mut adj = Adjacency::new(self.rank, self.vertices);
        for (s, l, t) in self.edges() {
            adj.dirs[s][2 * l] = Some(t);
            adj.dirs[t][2 * l + 1] = Some(s);
        }
        adj.prune(None);
        let start = (0..self.vertices).find(|&v| adj.alive[v])?;
        Some(adj.canonical(start))
    }

    /// Graph of the preimage `S·ρ⁻¹` of a finite-index lattice `S ≤ Z^k`
    /// under the abelianization `ρ` of the free group on `words`
    /// (which must be a free basis of the subgroup they generate).
    pub fn abelian_preimage(
        rank: usize,
        lattice: &IntLattice,
        words: &[Word],
    ) -> Result<StallingsGraph> {
        let k = lattice.dimension();
        if words.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: words.len(),
            });
        }
        if lattice.rank() != k {
            return Err(Error::InfiniteIndex);
        }
        let basis = lattice.basis();
        let diag: Vec<usize> = (0..k)
            .map(|j| {
                basis[(j, j)]
                    .to_usize()
                    .ok_or_else(|| Error::PreconditionViolated("index too large".into()))
            })
            .collect::<Result<_>>()?;
        let cosets = diag
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::PreconditionViolated("index too large".into()))?;

        // Mixed-radix encoding of coset representatives 0 ≤ x_j < diag[j].
        let encode = |x: &[Int]| -> usize {
            x.iter().zip(&diag).fold(0usize, |acc, (xi, &d)| {
                acc * d + xi.to_usize().expect("reduced coordinate")
            })
        };
        let decode = |mut idx: usize| -> Vec<Int> {
            let mut x = vec![Int::zero(); k];
            for j in (0..k).rev() {
                x[j] = Int::from(idx % diag[j]);
                idx /= diag[j];
            }
            x
        };
        let reduce = |x: &mut Vec<Int>| {
            for j in 0..k {
                let q = num_integer::Integer::div_floor(&x[j], &basis[(j, j)]);
                if !q.is_zero() {
                    for c in j..k {
                        x[c] -= &q * &basis[(j, c)];
                    }
                }
            }
        };

        let mut vertex_count = cosets;
        let mut edges = Vec::new();
        for v in 0..cosets {
            let x = decode(v);
            for (j, w) in words.iter().enumerate() {
                if w.rank() != rank {
                    return Err(Error::AlphabetMismatch {
                        left: rank,
                        right: w.rank(),
                    });
                }
                let mut y = x.clone();
                y[j] += Int::one();
                reduce(&mut y);
                debug_assert!(y.iter().all(|c| !c.is_negative()));
                let t = encode(&y);
                petal(w, v, t, &mut vertex_count, &mut edges);
            }
        }
        Ok(Self::fold(rank, vertex_count, 0, &edges))
    }

    fn check_rank(&self, other: &StallingsGraph) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::AlphabetMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }
}

/// Appends a path spelling `w` from `from` to `to`, allocating fresh inner vertices.
fn petal(
    w: &Word,
    from: usize,
    to: usize,
    vertex_count: &mut usize,
    edges: &mut Vec<(usize, usize, usize)>,
) {
    let letters = w.letters();
    if letters.is_empty() {
        return;
    }
    let mut v = from;
    for (i, &l) in letters.iter().enumerate() {
        let t = if i + 1 == letters.len() {
            to
        } else {
            *vertex_count += 1;
            *vertex_count - 1
        };
        if l.is_inverse() {
            edges.push((t, l.index(), v));
        } else {
            edges.push((v, l.index(), t));
        }
        v = t;
    }
}

/// Union-find folding of a labelled graph.
struct Folder {
    rank: usize,
    parent: Vec<usize>,
    dirs: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(rank: usize, vertex_count: usize) -> Self {
        Folder {
            rank,
            parent: (0..vertex_count).collect(),
            dirs: vec![vec![None; 2 * rank]; vertex_count],
            pending: Vec::new(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn link(&mut self, v: usize, dir: usize, t: usize) {
        let v = self.find(v);
        match self.dirs[v][dir] {
            Some(x) => self.pending.push((x, t)),
            None => self.dirs[v][dir] = Some(t),
        }
    }

    fn add_edge(&mut self, s: usize, l: usize, t: usize) {
        self.link(s, 2 * l, t);
        self.link(t, 2 * l + 1, s);
        self.drain();
    }

    fn merge_now(&mut self, a: usize, b: usize) {
        self.pending.push((a, b));
        self.drain();
    }

    fn drain(&mut self) {
        while let Some((x, y)) = self.pending.pop() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (keep, gone) = if x < y { (x, y) } else { (y, x) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.dirs[gone]);
            for (dir, t) in moved.into_iter().enumerate() {
                if let Some(t) = t {
                    self.link(keep, dir, t);
                }
            }
        }
    }

    /// Renumbers representatives densely, resolving stale targets.
    fn compact(mut self, base: usize) -> (Adjacency, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            if self.find(v) == v {
                id[v] = count;
                count += 1;
            }
        }
        let mut adj = Adjacency::new(self.rank, count);
        for v in 0..n {
            if id[v] == usize::MAX {
                continue;
            }
            for dir in 0..2 * self.rank {
                if let Some(t) = self.dirs[v][dir] {
                    let t = self.find(t);
                    adj.dirs[id[v]][dir] = Some(id[t]);
                }
            }
        }
        (adj, id[base])
    }
}

/// Mutable deterministic adjacency with `2n` directions per vertex.
struct Adjacency {
    rank: usize,
    dirs: Vec<Vec<Option<usize>>>,
    alive: Vec<bool>,
}

impl Adjacency {
    fn new(rank: usize, count: usize) -> Self {
        Adjacency {
            rank,
            dirs: vec![vec![None; 2 * rank]; count],
            alive: vec![true; count],
        }
    }

    fn degree(&self, v: usize) -> usize {
        self.dirs[v].iter().filter(|d| d.is_some()).count()
    }

    /// Repeatedly deletes degree ≤ 1 vertices other than `keep`.
    fn prune(&mut self, keep: Option<usize>) {
        let mut stack: Vec<usize> = (0..self.dirs.len())
            .filter(|&v| Some(v) != keep && self.degree(v) <= 1)
            .collect();
        while let Some(v) = stack.pop() {
            if !self.alive[v] || self.degree(v) > 1 {
                continue;
            }
            self.alive[v] = false;
            for dir in 0..2 * self.rank {
                if let Some(t) = self.dirs[v][dir].take() {
                    self.dirs[t][dir ^ 1] = None;
                    if Some(t) != keep && self.alive[t] && self.degree(t) <= 1 {
                        stack.push(t);
                    }
                }
            }
        }
    }

    fn component(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.dirs.len()];
        seen[start] = true;
        let mut out = vec![start];
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            i += 1;
            for t in self.dirs[v].iter().flatten() {
                if !seen[*t] {
                    seen[*t] = true;
                    out.push(*t);
                }
            }
        }
        out
    }

    /// Canonical BFS renumbering of the component of `base`.
    fn canonical(&self, base: usize) -> StallingsGraph {
        let mut id = vec![u32::MAX; self.dirs.len()];
        let mut order = vec![base];
        id[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for t in self.dirs[v].iter().flatten() {
                if id[*t] == u32::MAX {
                    id[*t] = order.len() as u32;
                    order.push(*t);
                }
            }
        }
        let vertices = order.len();
        let mut out = vec![None; vertices * self.rank];
        let mut inc = vec![None; vertices * self.rank];
        for (new, &v) in order.iter().enumerate() {
            for l in 0..self.rank {
                out[new * self.rank + l] = self.dirs[v][2 * l].map(|t| id[t]);
                inc[new * self.rank + l] = self.dirs[v][2 * l + 1].map(|t| id[t]);
            }
        }
        StallingsGraph {
            rank: self.rank,
            vertices,
            out,
            inc,
        }
    }
}
