mod common;

use std::collections::HashSet;

use assoc_spectrum::bracketing::iter;
use assoc_spectrum::groupoid::{
    boolean_op, catalog_example, cross_product_c, decode_idempotent, dihedral_commutator,
    implication, min_decrement, primal_family, sheffer, translation, IdempotentCode,
};
use assoc_spectrum::spectrum::{law_violations, stabilization_check, term_table, SpectrumOptions};
use assoc_spectrum::{spectrum, Groupoid};
use common::{groupoid_strategy, permutations};
use proptest::prelude::*;

fn brute_force(g: &Groupoid, n: usize) -> u64 {
    let tables: HashSet<_> = iter(n).unwrap().map(|b| term_table(&b, g).unwrap()).collect();
    tables.len() as u64
}

fn counts(g: &Groupoid, n: usize) -> Vec<u64> {
    spectrum(g, SpectrumOptions::up_to(n)).unwrap().counts
}

fn builders() -> Vec<(String, Groupoid, usize)> {
    let mut out = vec![
        ("sheffer".to_string(), sheffer(), 7),
        ("implication".to_string(), implication(), 7),
        ("cross".to_string(), cross_product_c(), 7),
        ("xplus1:3".to_string(), translation(3).unwrap(), 7),
        ("dihedral:3".to_string(), dihedral_commutator(3).unwrap(), 6),
        ("mindec:4".to_string(), min_decrement(4).unwrap(), 7),
        ("primal:4".to_string(), primal_family(4).unwrap(), 7),
    ];
    for code in [16u16, 35, 624] {
        out.push((format!("id:{code}"), decode_idempotent(IdempotentCode::new(code).unwrap()), 7));
    }
    for code in assoc_spectrum::groupoid::CATALOG_EXAMPLES {
        out.push((format!("siena:{code}"), catalog_example(code).unwrap(), 7));
    }
    for id in 1..=7 {
        out.push((format!("bool:{id}"), boolean_op(id).unwrap(), 7));
    }
    out
}

#[test]
fn builders_obey_laws_and_invariance() {
    for (name, g, n) in builders() {
        let s = counts(&g, n);
        assert!(law_violations(&s).is_empty(), "{name}: {:?}", law_violations(&s));
        assert_eq!(counts(&g.transpose(), n), s, "{name} transpose");
        let perms = permutations(g.size().min(4));
        for p in perms.iter().take(6) {
            // Extend a permutation of the first few elements by the identity.
            let full: Vec<usize> = p.iter().copied().chain(p.len()..g.size()).collect();
            assert_eq!(counts(&g.relabel(&full).unwrap(), n), s, "{name} relabel {full:?}");
        }
    }
}

#[test]
fn subgroupoids_have_smaller_spectra() {
    let g = decode_idempotent(IdempotentCode::new(178).unwrap());
    for gens in [vec![0u8], vec![0, 1], vec![1, 2], vec![0, 2]] {
        let h = g.subgroupoid_generated(&gens).unwrap().groupoid;
        let (sh, sg) = (counts(&h, 6), counts(&g, 6));
        assert!(sh.iter().zip(&sg).all(|(a, b)| a <= b), "{gens:?}");
    }
    let g = dihedral_commutator(3).unwrap();
    let h = g.subgroupoid_generated(&[3, 4]).unwrap().groupoid;
    assert!(counts(&h, 5).iter().zip(counts(&g, 5)).all(|(a, b)| *a <= b));
}

#[test]
fn stabilization_points() {
    assert_eq!(stabilization_check(&dihedral_commutator(8).unwrap(), 6).unwrap(), Some(4));
    assert_eq!(stabilization_check(&min_decrement(4).unwrap(), 7).unwrap(), Some(5));
    for id in 1..=4 {
        assert_eq!(stabilization_check(&boolean_op(id).unwrap(), 6).unwrap(), Some(3));
    }
    assert_eq!(stabilization_check(&sheffer(), 7).unwrap(), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engine_matches_brute_force(g in groupoid_strategy(2, 3)) {
        let s = spectrum(&g, SpectrumOptions::up_to(6).without_short_circuit()).unwrap();
        for n in 1..=6 {
            prop_assert_eq!(s.counts[n - 1], brute_force(&g, n), "n = {}", n);
        }
    }

    #[test]
    fn random_spectra_obey_laws(g in groupoid_strategy(2, 4)) {
        let s = counts(&g, 6);
        prop_assert!(law_violations(&s).is_empty(), "{:?}", law_violations(&s));
        let full = spectrum(&g, SpectrumOptions::up_to(6).without_short_circuit()).unwrap();
        prop_assert_eq!(&full.counts, &s);
    }

    #[test]
    fn invariant_under_isomorphism(g in groupoid_strategy(2, 4), pick in 0usize..24) {
        let perms = permutations(g.size());
        let p = &perms[pick % perms.len()];
        let s = counts(&g, 6);
        prop_assert_eq!(&counts(&g.relabel(p).unwrap(), 6), &s);
        prop_assert_eq!(&counts(&g.transpose(), 6), &s);
    }

    #[test]
    fn parallel_run_is_identical(g in groupoid_strategy(3, 4)) {
        let opts = SpectrumOptions::up_to(6).with_witnesses();
        let a = spectrum(&g, opts).unwrap();
        let b = spectrum(&g, opts.sequential()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn associative_iff_stable_at_three(g in groupoid_strategy(2, 3)) {
        prop_assert_eq!(g.is_associative(), counts(&g, 3)[2] == 1);
    }
}
