mod common;

use common::*;
use fatf_core::degrees::{dc_fatf, witness_kn};
use fatf_core::{Caps, FatfElement, FatfSubgroup, Index};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn product(rng: &mut ChaCha8Rng, h: &FatfSubgroup, len: usize) -> FatfElement {
    let basis = h.basis_elements();
    let (m, n) = h.ambient();
    let mut g = FatfElement::identity(m, n);
    for _ in 0..len {
        if basis.is_empty() {
            break;
        }
        let b = &basis[rng.gen_range(0..basis.len())];
        let b = if rng.gen() { b.clone() } else { b.inverse() };
        g = g.multiply(&b).unwrap();
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn center_is_exactly_the_lattice(seed in any::<u64>(), m in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words = rng.gen_range(1..=4);
        let h = random_fatf(&mut rng, m, 2, words, 4, 1);
        let meet = h.intersect(&FatfSubgroup::center(m, 2)).unwrap();
        let meet = meet.subgroup().unwrap();
        prop_assert!(meet.words().is_empty());
        prop_assert_eq!(meet.lattice(), h.lattice());
    }

    #[test]
    fn intersection_symmetric_and_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (wh, ch, wk, ck) = (rng.gen_range(1..=2), rng.gen_range(0..=1), rng.gen_range(1..=2), rng.gen_range(0..=1));
        let h = random_fatf(&mut rng, 1, 2, wh, 3, ch);
        let k = random_fatf(&mut rng, 1, 2, wk, 3, ck);
        let hk = h.intersect(&k).unwrap();
        let kh = k.intersect(&h).unwrap();
        match (hk.subgroup(), kh.subgroup()) {
            (Some(a), Some(b)) => {
                prop_assert!(a.equal(b));
                for g in a.basis_elements() {
                    prop_assert!(h.member(&g) && k.member(&g));
                }
                // products of basis elements of H ∩ K stay in H and K
                for _ in 0..100 {
                    let x = product(&mut rng, a, 4);
                    prop_assert!(h.member(&x) && k.member(&x) && a.member(&x));
                }
            }
            (None, None) => {}
            _ => prop_assert!(false, "intersection not symmetric"),
        }
    }

    #[test]
    fn dc_fatf_conjugation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words = rng.gen_range(1..=3);
        let h = random_fatf(&mut rng, 2, 2, words, 3, 0);
        let g = FatfElement::new(random_vector(&mut rng, 2, 3), random_word(&mut rng, 2, 1, 4));
        let caps = Caps::default();
        let a = dc_fatf(&h, &caps).unwrap();
        let b = dc_fatf(&h.conjugate(&g).unwrap(), &caps).unwrap();
        prop_assert_eq!(&a.value, &b.value);
        prop_assert!(h.basis_elements().iter().all(|x| a.witness.member(x)));
    }

    #[test]
    fn kn_on_valid_subgroups(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_fatf(&mut rng, 2, 2, 2, 3, 1);
        prop_assume!(h.words().len() >= 2 && h.lattice().index() == Index::Infinite);
        for n in 1..=10u64 {
            let k = witness_kn(&h, n).unwrap();
            prop_assert_eq!(k.reduced_rank(), 2);
            let meet = h.intersect(&k).unwrap();
            let meet = meet.subgroup().unwrap();
            prop_assert_eq!(meet.reduced_rank(), n as usize + meet.lattice().rank());
            prop_assert_eq!(meet.lattice().rank(), 0);
        }
    }
}

#[test]
fn conjugated_reduced_rank_unchanged() {
    let h = subgroup(
        2,
        3,
        &[(&[-1, 0], "bb"), (&[1, 0], "aCaC"), (&[0, 1], "baC")],
    );
    let g = element(&[3, -1], 3, "cab");
    let hg = h.conjugate(&g).unwrap();
    assert_eq!(hg.reduced_rank(), h.reduced_rank());
    assert!(hg.member(
        &g.inverse()
            .multiply(&h.basis_elements()[0])
            .unwrap()
            .multiply(&g)
            .unwrap()
    ));
}
