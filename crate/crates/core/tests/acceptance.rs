//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use fatf_core::degrees::{
    d_abu, d_abu_brute_force, dc_fatf, di_classify, di_search, mediant_check, u_matrix, witness_kn,
    SearchFamily,
};
use fatf_core::extensions::{algebraic_extensions, dc_free, rr_sum};
use fatf_core::fatf::{probe_intersection_rank, Intersection};
use fatf_core::intlinalg::{hnf, snf};
use fatf_core::{
    Caps, FatfElement, FatfSubgroup, Fringe, Index, Int, IntLattice, IntMatrix, Rational,
    StallingsGraph,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Property = (&'static str, fn(&mut ChaCha8Rng) -> Outcome);
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SAMPLES: usize = 500;

fn example() -> FatfSubgroup {
    subgroup(
        2,
        3,
        &[(&[-1, 0], "bb"), (&[1, 0], "aCaC"), (&[0, 1], "baC")],
    )
}

fn criterion_1() -> Outcome {
    let caps = Caps::default();
    let h = example();
    ensure!(
        h.vectors() == &mat(&[&[-1, 0], &[1, 0], &[0, 1]], 2),
        "A = {}",
        h.vectors()
    );
    ensure!(h.lattice().is_zero(), "L_H should be 0");
    let fringe = Fringe::compute(h.projection(), &caps).map_err(|e| e.to_string())?;
    ensure!(fringe.len() == 9, "fringe has {} members", fringe.len());
    let ae: BTreeSet<StallingsGraph> = algebraic_extensions(h.projection(), &caps)
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    let j = graph(3, &["b", "aC"]);
    ensure!(
        ae == BTreeSet::from([h.projection().clone(), j.clone()]),
        "AE has {} members",
        ae.len()
    );
    let uj = u_matrix(&h, &j).map_err(|e| e.to_string())?;
    ensure!(uj == mat(&[&[2, 0], &[0, 2], &[1, 1]], 2), "U_J = {uj}");
    let factors = snf(&uj).factors;
    ensure!(
        factors == vec![Int::from(1), Int::from(2)],
        "factors {factors:?}"
    );
    let b = h.lattice().basis().clone();
    let uh = u_matrix(&h, h.projection()).map_err(|e| e.to_string())?;
    let d0 = d_abu(h.vectors(), &b, &uh, &caps).map_err(|e| e.to_string())?;
    ensure!(d0.value == 0, "d(A,B,U_Hπ) = {}", d0.value);
    let d1 = d_abu(h.vectors(), &b, &uj, &caps).map_err(|e| e.to_string())?;
    ensure!(
        d1.value == 2 && d1.validate(h.vectors(), &b, &uj),
        "d(A,B,U_J) = {}",
        d1.value
    );
    let dc = dc_fatf(&h, &caps).map_err(|e| e.to_string())?;
    ensure!(dc.value == Rational::one(), "dc = {}", dc.value);
    Ok(())
}

fn criterion_2() -> Outcome {
    let h = example();
    let dc = dc_fatf(&h, &Caps::default()).map_err(|e| e.to_string())?;
    let j = graph(3, &["b", "aC"]);
    let row = dc
        .table
        .iter()
        .find(|r| r.extension == j)
        .ok_or("no row for J")?;
    let k = &row.witness;
    ensure!(
        h.basis_elements().iter().all(|g| k.member(g)),
        "H is not contained in K"
    );
    ensure!(k.reduced_rank() == 3, "r̃(K) = {}", k.reduced_rank());
    ensure!(k.projection() == &j, "Kπ ≠ J");
    let listed = subgroup(
        2,
        3,
        &[
            (&[-1, 1], "b"),
            (&[1, 0], "aC"),
            (&[1, 0], ""),
            (&[0, 1], ""),
        ],
    );
    ensure!(
        listed.reduced_rank() == k.reduced_rank(),
        "rank differs from the reference K"
    );
    ensure!(
        h.basis_elements().iter().all(|g| dc.witness.member(g)),
        "H is not contained in the dc witness"
    );
    Ok(())
}

fn criterion_3() -> Outcome {
    let h = graph(2, &["a", "Bab"]);
    let k = graph(2, &["b", "aa", "aba"]);
    let meet = h.intersect(&k).map_err(|e| e.to_string())?;
    ensure!(meet.reduced_rank() == 2, "r̃(H∩K) = {}", meet.reduced_rank());
    ensure!(h.reduced_rank() * k.reduced_rank() == 2, "r̃(H)r̃(K) ≠ 2");
    ensure!(meet == graph(2, &["aa", "Baab", "Baba"]), "H∩K differs");
    let sum = rr_sum(&h, &k).map_err(|e| e.to_string())?;
    ensure!(sum == 2, "rr_sum = {sum}");
    Ok(())
}

fn criterion_4() -> Outcome {
    let h = subgroup(1, 2, &[(&[0], "a"), (&[0], "b")]);
    for n in 1..=10u64 {
        let k = witness_kn(&h, n).map_err(|e| e.to_string())?;
        ensure!(k.reduced_rank() == 2, "r̃(K_{n}) = {}", k.reduced_rank());
        let meet = h.intersect(&k).map_err(|e| e.to_string())?;
        let meet = meet
            .subgroup()
            .ok_or(format!("H ∩ K_{n} not finitely generated"))?;
        ensure!(
            meet.reduced_rank() == n as usize,
            "r̃(H∩K_{n}) = {}",
            meet.reduced_rank()
        );
    }
    Ok(())
}

fn fringe_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let caps = Caps::default();
    let mut done = 0;
    while done < SAMPLES {
        let n = rng.gen_range(1..=3);
        let g0 = rng.gen_range(1..=2);
        let g = random_graph(rng, n, g0, 4);
        if g.vertex_count() > 6 {
            continue;
        }
        done += 1;
        let fringe = Fringe::compute(&g, &caps).map_err(|e| e.to_string())?;
        let ours: BTreeSet<StallingsGraph> =
            fringe.members().iter().map(|m| m.graph.clone()).collect();
        ensure!(ours == brute_fringe(&g), "fringe mismatch for {g:?}");
    }
    Ok(())
}

fn snf_reconstruction(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..SAMPLES {
        let (r, c) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let u = random_matrix(rng, r, c, 9);
        let s = snf(&u);
        let d = s.p.mul(&u).unwrap().mul(&s.q).unwrap();
        ensure!(d == s.diagonal(), "P·U·Q ≠ D for {u}");
        ensure!(
            s.p.mul(&s.p_inv).unwrap() == IntMatrix::identity(r),
            "P⁻¹ wrong"
        );
        ensure!(
            s.q.mul(&s.q_inv).unwrap() == IntMatrix::identity(c),
            "Q⁻¹ wrong"
        );
        for w in s.factors.windows(2) {
            ensure!((&w[1] % &w[0]).is_zero(), "factors do not divide");
        }
        ensure!(
            s.factors.iter().all(|f| *f > Int::zero()),
            "non-positive factor"
        );
    }
    Ok(())
}

fn hnf_canonicity(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..SAMPLES {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let m = random_matrix(rng, r, c, 6);
        let v = random_unimodular(rng, r, 6);
        let a = hnf(&m);
        let b = hnf(&v.mul(&m).unwrap());
        ensure!(a.h == b.h, "HNF is not invariant under row operations");
        ensure!(a.transform.is_unimodular(), "transform not unimodular");
        ensure!(
            a.transform.mul(&m).unwrap().select_rows(0..a.rank()) == a.h,
            "U·M ≠ H"
        );
    }
    Ok(())
}

fn rank_modularity(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..SAMPLES {
        let m = rng.gen_range(1..=4);
        let g0 = rng.gen_range(0..=3);
        let l1 = IntLattice::from_generators(&random_matrix(rng, g0, m, 4));
        let g0 = rng.gen_range(0..=3);
        let l2 = IntLattice::from_generators(&random_matrix(rng, g0, m, 4));
        let sum = l1.sum(&l2).unwrap();
        let meet = l1.intersect(&l2).unwrap();
        ensure!(
            l1.rank() + l2.rank() == sum.rank() + meet.rank(),
            "rank modularity fails"
        );
        ensure!(
            l1.contains_lattice(&meet) && l2.contains_lattice(&meet),
            "intersection not contained"
        );
    }
    Ok(())
}

fn preimage_pointwise(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..SAMPLES {
        let (k, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let r = random_matrix(rng, k, m, 3);
        let g0 = rng.gen_range(0..=m);
        let l = IntLattice::from_generators(&random_matrix(rng, g0, m, 4));
        let pre = IntLattice::preimage(&r, &l).unwrap();
        for _ in 0..10 {
            let x = random_vector(rng, k, 5);
            let image = r.left_apply(&x).unwrap();
            ensure!(
                pre.contains(&x) == l.contains(&image),
                "preimage membership differs"
            );
        }
    }
    Ok(())
}

fn d_abu_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let chains = [
        (1, 1),
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 2),
        (2, 4),
        (3, 3),
        (4, 4),
        (1, 0),
        (2, 0),
        (4, 0),
    ];
    let caps = Caps::default();
    for _ in 0..SAMPLES {
        let m = rng.gen_range(1..=2);
        let (d1, d2) = chains[rng.gen_range(0..chains.len())];
        let u = random_unimodular(rng, 2, 3)
            .mul(&mat(&[&[d1, 0], &[0, d2]], 2))
            .unwrap()
            .mul(&random_unimodular(rng, 2, 3))
            .unwrap();
        let a = random_matrix(rng, 2, m, 4);
        let g0 = rng.gen_range(0..=1);
        let b = random_matrix(rng, g0, m, 2);
        let cert = d_abu(&a, &b, &u, &caps).map_err(|e| e.to_string())?;
        ensure!(cert.validate(&a, &b, &u), "invalid certificate");
        ensure!(cert.value <= m, "d exceeds m");
        let top: i64 = snf(&u).factors.last().unwrap().try_into().unwrap();
        let brute = d_abu_brute_force(&a, &b, &u, 0..top);
        ensure!(
            cert.value <= brute,
            "brute force found {brute} < {}",
            cert.value
        );
    }
    Ok(())
}

fn mediants(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..SAMPLES {
        let v: Vec<Int> = (0..4).map(|_| Int::from(rng.gen_range(1..1000))).collect();
        ensure!(mediant_check(&v[0], &v[1], &v[2], &v[3]), "mediant fails");
    }
    Ok(())
}

fn dc_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    let caps = Caps::default();
    let one = Rational::one();
    for _ in 0..SAMPLES {
        let n = rng.gen_range(2..=3);
        let g0 = rng.gen_range(1..=2);
        let g = random_graph(rng, n, g0, 3);
        let x = random_word(rng, n, 0, 3);
        let a = dc_free(&g, &caps).map_err(|e| e.to_string())?.value;
        let b = dc_free(&g.conjugate(&x), &caps)
            .map_err(|e| e.to_string())?
            .value;
        ensure!(a >= one && a == b, "dc_free {a} vs conjugate {b}");
    }
    for _ in 0..SAMPLES {
        let m = rng.gen_range(0..=2);
        let g0 = rng.gen_range(1..=2);
        let g1 = rng.gen_range(0..=1);
        let h = random_fatf(rng, m, 2, g0, 3, g1);
        let g = FatfElement::new(random_vector(rng, m, 2), random_word(rng, 2, 0, 3));
        let a = dc_fatf(&h, &caps).map_err(|e| e.to_string())?.value;
        let b = dc_fatf(&h.conjugate(&g).unwrap(), &caps)
            .map_err(|e| e.to_string())?
            .value;
        ensure!(a >= one && a == b, "dc_fatf {a} vs conjugate {b}");
    }
    Ok(())
}

fn neumann_bounds(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..SAMPLES {
        let n = rng.gen_range(2..=3);
        let g0 = rng.gen_range(1..=3);
        let h = random_graph(rng, n, g0, 5);
        let g0 = rng.gen_range(1..=3);
        let k = random_graph(rng, n, g0, 5);
        let product = h.reduced_rank() * k.reduced_rank();
        let meet = h.intersect(&k).unwrap();
        ensure!(
            meet.reduced_rank() <= product,
            "Friedman–Mineyev bound fails"
        );
        let sum = rr_sum(&h, &k).unwrap();
        ensure!(
            sum <= product && meet.reduced_rank() <= sum,
            "rr_sum bound fails"
        );
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let parts: [Property; 9] = [
        ("fringe oracle", fringe_oracle),
        ("SNF reconstruction", snf_reconstruction),
        ("HNF canonicity", hnf_canonicity),
        ("rank modularity", rank_modularity),
        ("preimage", preimage_pointwise),
        ("d_abu", d_abu_oracle),
        ("mediant", mediants),
        ("dc invariance", dc_invariance),
        ("Neumann bounds", neumann_bounds),
    ];
    for (name, f) in parts {
        f(&mut rng).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let caps = Caps::default();
    let one = Rational::one();
    for i in 0..50 {
        let m = rng.gen_range(1..=2);
        let g0 = rng.gen_range(0..=1);
        let g1 = rng.gen_range(0..=2);
        let h = random_fatf(&mut rng, m, 2, g0, 4, g1);
        ensure!(h.words().len() <= 1, "projection rank too large");
        let s = di_search(&h, SearchFamily::All, 8, i).map_err(|e| e.to_string())?;
        ensure!(s.ratio <= one, "ratio {} > 1 for r(Hπ) ≤ 1", s.ratio);
    }
    let mut done = 0;
    while done < 20 {
        let m = rng.gen_range(1..=2);
        let h = random_fatf(&mut rng, m, 2, 2, 3, m + 1);
        if h.words().len() < 2 {
            continue;
        }
        let Index::Finite(l) = h.lattice().index() else {
            continue;
        };
        done += 1;
        let bound = Rational::from_integer(l * Int::from(h.projection().reduced_rank()));
        let s = di_search(&h, SearchFamily::All, 8, done as u64).map_err(|e| e.to_string())?;
        ensure!(s.ratio <= bound, "search ratio {} above {bound}", s.ratio);
        let report = di_classify(&h, 8, done as u64, None, &caps).map_err(|e| e.to_string())?;
        let upper = report.upper.clone().ok_or("missing upper bound")?;
        let dc = report.dc.clone().ok_or("missing dc")?;
        ensure!(
            report.lower <= upper,
            "bracket [{}, {upper}] empty",
            report.lower
        );
        ensure!(report.lower >= dc, "lower {} below dc {dc}", report.lower);
        ensure!(upper == bound, "upper {upper} ≠ l·r̃(Hπ) = {bound}");
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let h = subgroup(1, 2, &[(&[1], "a"), (&[0], "b")]);
    let k = subgroup(1, 2, &[(&[0], "a"), (&[0], "b")]);
    match h.intersect(&k).map_err(|e| e.to_string())? {
        Intersection::NotFinitelyGenerated(_) => {}
        Intersection::Finite(..) => return Err("intersection reported finitely generated".into()),
    }
    let ranks: Vec<usize> = [1, 3, 5]
        .iter()
        .map(|&r| probe_intersection_rank(&h, &k, r, 1_000_000).unwrap())
        .collect();
    ensure!(
        ranks.windows(2).all(|w| w[0] < w[1]),
        "probe ranks {ranks:?}"
    );
    Ok(())
}

fn criterion_8() -> Outcome {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..20 {
        let n = 2 + i % 2;
        let g0 = rng.gen_range(1..=3);
        let h = random_fatf(&mut rng, 0, n, g0, 4, 0);
        let a = dc_fatf(&h, &caps).map_err(|e| e.to_string())?.value;
        let b = dc_free(h.projection(), &caps)
            .map_err(|e| e.to_string())?
            .value;
        ensure!(a == b, "dc_fatf {a} ≠ dc_free {b}");
    }
    let g = graph(2, &["aa", "bb", "ab"]);
    let dc = dc_free(&g, &caps).map_err(|e| e.to_string())?;
    ensure!(
        dc.value == Rational::from_integer(Int::from(2)),
        "dc_free = {}",
        dc.value
    );
    ensure!(
        dc.witness == StallingsGraph::bouquet(2),
        "witness is not F₂"
    );
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("worked example end to end", criterion_1),
        ("dc witness validity", criterion_2),
        ("Hanna Neumann tightness", criterion_3),
        ("K_N witness family", criterion_4),
        ("property suite", criterion_5),
        ("inertia bracket consistency", criterion_6),
        ("non-Howson detection", criterion_7),
        ("free-case embedding", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
