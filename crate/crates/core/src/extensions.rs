//! Fringes, free factors, algebraic extensions and `dc_{F_n}`.

use std::collections::{HashMap, VecDeque};

use num_traits::One;

use crate::intlinalg::{snf, Matrix};
use crate::whitehead::is_free_factor_of_ambient;
use crate::{Caps, Error, Int, Rational, Result, StallingsGraph};

/// One member of a fringe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FringeMember {
    pub graph: StallingsGraph,
    pub rank: usize,
    /// Set by [`Fringe::clean`]: whether the member is an algebraic extension.
    pub algebraic: Option<bool>,
}

/// Closure of a Stallings graph under single vertex identifications.
#[derive(Clone, Debug)]
pub struct Fringe {
    members: Vec<FringeMember>,
    /// `(from, to)` pairs related by one identification with rank increase 1.
    free_steps: Vec<(usize, usize)>,
}

/// Classification of a single identification step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorStep {
    FreeFactor,
    Algebraic,
}

/// `dc_{F_n}(H)` with a witness algebraic extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcResult {
    pub value: Rational,
    pub witness: StallingsGraph,
}

/// Rank test after one identification: `FreeFactor` iff `r(N) = r(M) + 1`.
pub fn fast_factor_step(m: &StallingsGraph, n: &StallingsGraph) -> FactorStep {
    if n.subgroup_rank() == m.subgroup_rank() + 1 {
        FactorStep::FreeFactor
    } else {
        FactorStep::Algebraic
    }
}

impl Fringe {
    /// Breadth-first closure from `g`; member 0 is `g` itself.
    pub fn compute(g: &StallingsGraph, caps: &Caps) -> Result<Fringe> {
        let mut members = vec![FringeMember {
            graph: g.clone(),
            rank: g.subgroup_rank(),
            algebraic: None,
        }];
        let mut seen: HashMap<StallingsGraph, usize> = HashMap::from([(g.clone(), 0)]);
        let mut free_steps = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let m = members[i].graph.clone();
            let v = m.vertex_count();
            for a in 0..v {
                for b in a + 1..v {
                    let n = m.identify(a, b);
                    let step = fast_factor_step(&m, &n);
                    let j = match seen.get(&n) {
                        Some(&j) => j,
                        None => {
                            if members.len() >= caps.max_fringe {
                                return Err(Error::FringeCapExceeded {
                                    cap: caps.max_fringe,
                                });
                            }
                            let j = members.len();
                            seen.insert(n.clone(), j);
                            members.push(FringeMember {
                                rank: n.subgroup_rank(),
                                graph: n,
                                algebraic: None,
                            });
                            queue.push_back(j);
                            j
                        }
                    };
                    if step == FactorStep::FreeFactor {
                        free_steps.push((i, j));
                    }
                }
            }
        }
        free_steps.sort_unstable();
        free_steps.dedup();
        Ok(Fringe {
            members,
            free_steps,
        })
    }

    pub fn members(&self) -> &[FringeMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: &StallingsGraph) -> bool {
        self.members.iter().any(|m| &m.graph == g)
    }

    /// Marks each member algebraic unless another member of smaller rank is a
    /// proper free factor of it.
    pub fn clean(&mut self, caps: &Caps) -> Result<()> {
        let n = self.members.len();
        for j in 0..n {
            let mut algebraic = true;
            for i in 0..n {
                if i == j || self.members[i].rank >= self.members[j].rank {
                    continue;
                }
                let (hi, hj) = (&self.members[i].graph, &self.members[j].graph);
                if !hi.is_subgroup_of(hj) {
                    continue;
                }
                let factor =
                    self.free_steps.binary_search(&(i, j)).is_ok() || is_free_factor(hi, hj, caps)?;
                if factor {
                    algebraic = false;
                    break;
                }
            }
            self.members[j].algebraic = Some(algebraic);
        }
        Ok(())
    }

    /// Members flagged algebraic by [`Fringe::clean`], in fringe order.
    pub fn algebraic(&self) -> Vec<StallingsGraph> {
        self.members
            .iter()
            .filter(|m| m.algebraic == Some(true))
            .map(|m| m.graph.clone())
            .collect()
    }
}

/// Decides whether `H` is a free factor of `K`; `H ≤ K` is required.
pub fn is_free_factor(h: &StallingsGraph, k: &StallingsGraph, caps: &Caps) -> Result<bool> {
    if !h.is_subgroup_of(k) {
        return Err(Error::NotContained);
    }
    if h == k {
        return Ok(true);
    }
    let (rh, rk) = (h.subgroup_rank(), k.subgroup_rank());
    if rh >= rk {
        return Ok(false);
    }
    let words = k.rewrite_all(&h.basis())?;
    // abelian filter: a free factor maps onto a direct summand of Z^q
    if rh > 0 {
        let rows: Vec<Vec<Int>> = words.iter().map(|w| w.exponent_sums()).collect();
        let s = snf(&Matrix::from_rows(rk, rows)?);
        if s.rank() < rh || s.factors.iter().any(|d| !d.is_one()) {
            return Ok(false);
        }
    }
    is_free_factor_of_ambient(rk, &words, caps.max_descent)
}

/// The algebraic extensions of `H`, `H` first.
pub fn algebraic_extensions(h: &StallingsGraph, caps: &Caps) -> Result<Vec<StallingsGraph>> {
    let mut fringe = Fringe::compute(h, caps)?;
    fringe.clean(caps)?;
    Ok(fringe.algebraic())
}

/// `r̃(H)/r̃(K)` with `0/0 = 1`.
pub fn reduced_rank_ratio(h: usize, k: usize) -> Rational {
    if k == 0 {
        debug_assert_eq!(h, 0);
        Rational::one()
    } else {
        Rational::new(Int::from(h), Int::from(k))
    }
}

/// `dc_{F_n}(H)`: the largest `r̃(H)/r̃(K)` over algebraic extensions `K`,
/// ties broken by the smallest canonical graph.
pub fn dc_free(h: &StallingsGraph, caps: &Caps) -> Result<DcResult> {
    let rh = h.reduced_rank();
    let mut best: Option<DcResult> = None;
    for k in algebraic_extensions(h, caps)? {
        let value = reduced_rank_ratio(rh, k.reduced_rank());
        let better = match &best {
            None => true,
            Some(b) => value > b.value || (value == b.value && k < b.witness),
        };
        if better {
            best = Some(DcResult { value, witness: k });
        }
    }
    Ok(best.expect("H is its own algebraic extension"))
}

/// `r̃(H, K)`: the sum of reduced ranks over the pullback components.
pub fn rr_sum(h: &StallingsGraph, k: &StallingsGraph) -> Result<usize> {
    Ok(h.pullback_components(k)?.iter().map(|c| c.1).sum())
}
