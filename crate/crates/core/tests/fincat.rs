mod common;

use common::{group, tower};
use orbit_site_core::fincat::*;
use orbit_site_core::orbit::{OrbitCategory, Variant};
use proptest::prelude::*;

fn c2() -> FinCat {
    FinCat::from_group_table(2, |a, b| a ^ b)
}

fn discrete(n: usize) -> FinCat {
    FinCat::from_poset(n, |a, b| a == b)
}

/// Number of composable `n`-tuples by brute force over all morphism tuples.
fn chain_count_oracle(c: &FinCat, n: usize, normalized: bool) -> usize {
    if n == 0 {
        return c.object_count();
    }
    let ms: Vec<usize> = (0..c.morphism_count()).filter(|&f| !(normalized && c.is_identity(f))).collect();
    let mut tuples: Vec<Vec<usize>> = ms.iter().map(|&f| vec![f]).collect();
    for _ in 1..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                let end = c.cod(*t.last().unwrap());
                ms.iter()
                    .filter(move |&&f| c.dom(f) == end)
                    .map(move |&f| {
                        let mut u = t.clone();
                        u.push(f);
                        u
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    tuples.len()
}

#[test]
fn validation_examples() {
    assert_eq!(validate_category(&c2()), None);
    let o = OrbitCategory::new(group("S3"), None, Variant::All).unwrap();
    assert_eq!(validate_category(&o.cat), None);

    // identity ∘ t = identity breaks the unit law
    let mut parts = c2().to_parts();
    for e in parts.compose.iter_mut() {
        if (e.0, e.1) == (0, 1) {
            e.2 = 0;
        }
    }
    assert_eq!(FinCat::from_parts(&parts).unwrap_err(), Violation::Unit { morphism: 1 });

    // a composite landing on the wrong codomain
    let mut parts = FinCat::from_poset(2, |a, b| a <= b).to_parts();
    let arrow = parts.morphisms.iter().position(|m| m.dom == 0 && m.cod == 1).unwrap();
    let id0 = parts.identities[0];
    for e in parts.compose.iter_mut() {
        if (e.0, e.1) == (arrow, id0) {
            e.2 = id0;
        }
    }
    assert_eq!(FinCat::from_parts(&parts).unwrap_err(), Violation::WrongEnds { g: arrow, f: id0 });
}

#[test]
fn parts_round_trip() {
    let o = OrbitCategory::new(group("A4"), None, Variant::All).unwrap();
    let back = FinCat::from_parts(&o.cat.to_parts()).unwrap();
    assert_eq!(back, o.cat);
}

#[test]
fn full_subcategory_examples() {
    let o = OrbitCategory::new(group("S3"), None, Variant::All).unwrap();
    let all: Vec<usize> = (0..o.cat.object_count()).collect();
    let (same, incl) = full_subcategory(&o.cat, &all).unwrap();
    assert_eq!(same, o.cat);
    assert_eq!(incl, FinFunctor::identity(&o.cat));

    let t = tower("S3", 3);
    let objs: Vec<usize> = (0..o.cat.object_count()).filter(|&x| o.subgroup(x).order() % 2 == 1).collect();
    let (op, _) = full_subcategory(&o.cat, &objs).unwrap();
    assert_eq!(op.object_count(), t.p_subgroups.cat.object_count());
    assert_eq!(op.morphism_count(), t.p_subgroups.cat.morphism_count());

    let (opo, _) = full_subcategory(&op, &[1]).unwrap();
    assert_eq!((opo.object_count(), opo.morphism_count()), (1, 2));

    assert!(full_subcategory(&o.cat, &[]).is_err());
}

#[test]
fn comma_category_examples() {
    let t = tower("S3", 3);
    let (d, c) = (&t.p_nontrivial.cat, &t.full.cat);
    let g1 = 0;
    assert!(comma_category(d, c, &t.iota, g1).cat.object_count() == 0);
    let c3 = t.iota.obj(0);
    let k = comma_category(d, c, &t.iota, c3);
    assert_eq!(k.cat.object_count(), 2);
    assert_eq!(components(&k.cat), vec![0, 0]);
    assert!(k.cat.hom(0, 1).iter().all(|&f| k.cat.is_iso(f)));

    // overcategories have (x, id) terminal
    let id = FinFunctor::identity(c);
    for x in 0..c.object_count() {
        let k = comma_category(c, c, &id, x);
        let term = k.pairs.iter().position(|&(y, f)| y == x && f == c.identity(x)).unwrap();
        assert!((0..k.cat.object_count()).all(|y| k.cat.hom(y, term).len() == 1));
        assert_eq!(validate_category(&k.cat), None);
    }
}

#[test]
fn skeleton_examples() {
    let p = FinCat::from_poset(4, |a, b| a <= b);
    let s = skeleton(&p);
    assert_eq!(s.cat, p);

    let s = skeleton(&c2());
    assert_eq!(s.cat, c2());

    let t = tower("S4", 2);
    let s = skeleton(&t.p_nontrivial.cat);
    assert_eq!(s.cat.object_count(), 6);
    let mut orders: Vec<usize> = s.inclusion.object_map.iter().map(|&x| t.p_nontrivial.subgroup(x).order()).collect();
    orders.sort();
    assert_eq!(orders, vec![2, 2, 4, 4, 4, 8]);
}

#[test]
fn skeleton_data_is_an_equivalence() {
    for (g, p) in [("S4", 2), ("A4", 2), ("S4", 3), ("S3", 3)] {
        let t = tower(g, p);
        for c in [&t.full.cat, &t.p_subgroups.cat, &t.p_nontrivial.cat] {
            let s = skeleton(c);
            assert!(s.inclusion.is_valid(&s.cat, c));
            assert!(s.inclusion.is_fully_faithful(&s.cat, c));
            assert!(s.retraction.is_valid(c, &s.cat));
            assert_eq!(s.retraction.after(&s.inclusion), FinFunctor::identity(&s.cat));
            for x in 0..c.object_count() {
                let f = s.transport[x];
                assert!(c.is_iso(f) && c.dom(f) == x);
                assert_eq!(c.cod(f), s.inclusion.obj(s.retraction.obj(x)));
            }
        }
    }
}

#[test]
fn nerve_examples() {
    let c = c2();
    assert_eq!(nerve_chains(&c, 2, false, 100).unwrap().len(), 4);
    let n = nerve_chains(&c, 2, true, 100).unwrap();
    assert_eq!(n.len(), 1);
    assert_eq!(n[0].morphisms, vec![1, 1]);
    let o = OrbitCategory::new(group("S3"), None, Variant::All).unwrap();
    let zero = nerve_chains(&o.cat, 0, false, 100).unwrap();
    assert_eq!(zero.iter().map(|ch| ch.start).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
    assert!(matches!(
        nerve_chains(&o.cat, 3, false, 10),
        Err(orbit_site_core::Error::ChainCountGuardExceeded { limit: 10 })
    ));
}

#[test]
fn nerve_counts_against_enumeration() {
    for (g, p) in [("S3", 3), ("A4", 2), ("C4", 2)] {
        let t = tower(g, p);
        for c in [&t.full.cat, &t.p_nontrivial.cat] {
            for n in 0..=3 {
                for norm in [false, true] {
                    let chains = nerve_chains(c, n, norm, u64::MAX).unwrap();
                    assert_eq!(chains.len(), chain_count_oracle(c, n, norm));
                    assert_eq!(chains.len() as u64, chain_count(c, n, norm));
                    assert!(chains.windows(2).all(|w| w[0].morphisms < w[1].morphisms || n == 0));
                }
            }
        }
    }
}

#[test]
fn filtered_examples() {
    assert!(is_filtered(&FinCat::from_poset(3, |a, b| a <= b)));
    assert!(!is_filtered(&discrete(0)));
    assert!(!is_filtered(&discrete(2)));
    // a group is filtered only when trivial
    assert!(!is_filtered(&c2()));
    assert!(is_filtered(&FinCat::from_group_table(1, |_, _| 0)));
    let o = OrbitCategory::new(group("S3"), None, Variant::All).unwrap();
    assert!(is_filtered(&o.cat));
}

#[test]
fn opposite_is_involutive() {
    let o = OrbitCategory::new(group("A4"), None, Variant::All).unwrap();
    let op = opposite(&o.cat);
    assert_eq!(validate_category(&op), None);
    assert_eq!(opposite(&op), o.cat);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Random posets: validation passes, chain counts agree with brute force,
    /// and a poset is its own skeleton.
    #[test]
    fn random_posets(n in 1usize..6, bits in prop::collection::vec(any::<bool>(), 36)) {
        // a ≤ b iff a ⊆ b on a random family of subsets of {0..5}
        let sets: Vec<u8> = (0..n)
            .map(|i| (0..6).filter(|&j| bits[i * 6 + j]).fold(0u8, |s, j| s | 1 << j))
            .collect();
        let mut uniq = sets.clone();
        uniq.sort();
        uniq.dedup();
        let c = FinCat::from_poset(uniq.len(), |a, b| uniq[a] & !uniq[b] == 0);
        prop_assert_eq!(validate_category(&c), None);
        for k in 0..=3 {
            prop_assert_eq!(chain_count(&c, k, true) as usize, chain_count_oracle(&c, k, true));
        }
        prop_assert_eq!(skeleton(&c).cat, c.clone());
        let has_top = (0..c.object_count()).any(|t| (0..c.object_count()).all(|x| !c.hom(x, t).is_empty()));
        let directed = (0..c.object_count())
            .all(|a| (0..c.object_count()).all(|b| (0..c.object_count()).any(|z| !c.hom(a, z).is_empty() && !c.hom(b, z).is_empty())));
        prop_assert_eq!(is_filtered(&c), directed);
        if has_top {
            prop_assert!(is_filtered(&c));
        }
    }
}
