mod common;

use std::collections::BTreeSet;

use common::{group, tower, BATTERY};
use num_traits::ToPrimitive;
use orbit_site_core::fincat::{skeleton, FinCat};
use orbit_site_core::linalg::AbGroup;
use orbit_site_core::picard::*;
use orbit_site_core::{Error, Guards};
use proptest::prelude::*;

fn cyc(n: u64) -> AbGroup {
    AbGroup::cyclic(n)
}

fn order(g: &AbGroup) -> u64 {
    g.order().unwrap().to_u64().unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One object, automorphisms `Z/a × Z/b` written additively.
fn abelian_monoid(a: usize, b: usize) -> FinCat {
    FinCat::from_group_table(a * b, |x, y| ((x / b + y / b) % a) * b + (x % b + y % b) % b)
}

/// `|Pic|` as cocycles over coboundaries, both counted by plain enumeration.
fn pic_order_oracle(c: &FinCat, m: u64) -> u64 {
    let n = c.morphism_count();
    let total = m.pow(n as u32);
    let mut cocycles = 0u64;
    for code in 0..total {
        let s: Vec<u64> = (0..n).map(|f| code / m.pow(f as u32) % m).collect();
        let ok = (0..n).all(|g| c.into(c.dom(g)).iter().all(|&f| s[c.compose(g, f)] == (s[g] + s[f]) % m));
        cocycles += ok as u64;
    }
    let mut boundaries = BTreeSet::new();
    for code in 0..m.pow(c.object_count() as u32) {
        let mu: Vec<u64> = (0..c.object_count()).map(|x| code / m.pow(x as u32) % m).collect();
        let d: Vec<u64> = (0..n).map(|f| (mu[c.cod(f)] + m - mu[c.dom(f)]) % m).collect();
        boundaries.insert(d);
    }
    cocycles / boundaries.len() as u64
}

#[test]
fn h1_units_examples() {
    let g = Guards::default();
    assert!(h1_units(&group("S3"), 3, 3, &g).unwrap().is_isomorphic(&cyc(2)));
    assert!(h1_units(&group("S3"), 3, 4, &g).unwrap().is_trivial());
    assert!(h1_units(&group("S3"), 3, 5, &g).unwrap().is_isomorphic(&cyc(2)));
    for q in [3, 4, 5, 7, 9] {
        assert!(h1_units(&group("Q8"), 2, q, &g).unwrap().is_trivial());
        assert!(h1_units(&group("C4"), 2, q, &g).unwrap().is_trivial());
    }
    assert!(matches!(h1_units(&group("C4"), 3, 4, &g), Err(Error::EmptyCategory)));
}

#[test]
fn bruteforce_examples() {
    let c2 = FinCat::from_group_table(2, |a, b| a ^ b);
    let r = pic_bruteforce(&c2, 2, 1 << 20).unwrap();
    assert!(r.group.is_isomorphic(&cyc(2)));
    assert_eq!(r.classes.iter().map(|l| l.scalars.clone()).collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1]]);

    let t = tower("A4", 2);
    for c in [&c2, &t.full.cat, &t.p_nontrivial.cat] {
        let r = pic_bruteforce(c, 1, 1 << 20).unwrap();
        assert!(r.group.is_trivial());
        assert_eq!(r.classes.len(), 1);
    }

    let r = pic_bruteforce(&t.p_nontrivial.cat, 3, 1 << 24).unwrap();
    let h1 = h1_units(&group("A4"), 2, 4, &Guards::default()).unwrap();
    assert!(r.group.is_isomorphic(&h1));
    assert_eq!(order(&r.group), 3);

    assert!(matches!(pic_bruteforce(&t.p_nontrivial.cat, 3, 10), Err(Error::EnumerationGuardExceeded { limit: 10 })));
}

#[test]
fn bruteforce_classes_are_distinct_cocycles() {
    for (g, p, m) in [("S3", 3, 2), ("A4", 2, 3), ("S3", 3, 4), ("A4", 2, 6)] {
        let t = tower(g, p);
        let sk = skeleton(&t.p_nontrivial.cat).cat;
        let r = pic_bruteforce(&t.p_nontrivial.cat, m, 1 << 24).unwrap();
        assert_eq!(r.classes.len() as u64, order(&r.group));
        for (i, a) in r.classes.iter().enumerate() {
            assert!(a.is_cocycle(&sk));
            for b in &r.classes[i + 1..] {
                assert!(!cohomologous(&sk, a, b));
            }
        }
        let mut sorted = r.classes.clone();
        sorted.sort_by(|a, b| a.scalars.cmp(&b.scalars));
        assert_eq!(sorted, r.classes);
    }
}

#[test]
fn bruteforce_against_counting_oracle() {
    for (a, b) in [(1, 1), (2, 1), (3, 1), (4, 1), (2, 2), (6, 1)] {
        let c = abelian_monoid(a, b);
        for m in 1..=6u64 {
            let r = pic_bruteforce_full(&c, m, 1 << 24).unwrap();
            let want = gcd(a as u64, m) * gcd(b as u64, m);
            assert_eq!(order(&r.group), want, "Z/{a} x Z/{b}, m={m}");
            assert_eq!(order(&r.group), pic_order_oracle(&c, m));
        }
    }
    let t = tower("S3", 3);
    for c in [&t.p_nontrivial.cat, &t.p_subgroups.cat] {
        for m in 1..=4u64 {
            let full = pic_bruteforce_full(c, m, 1 << 24).unwrap();
            let sk = pic_bruteforce(c, m, 1 << 24).unwrap();
            assert!(full.group.is_isomorphic(&sk.group));
            assert_eq!(order(&full.group), pic_order_oracle(c, m));
        }
    }
    // the full S3 orbit category has a terminal object
    let c = &t.full.cat;
    assert!(pic_bruteforce(c, 2, 1 << 24).unwrap().group.is_trivial());
}

#[test]
fn group_from_table_examples() {
    let z4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
    assert!(group_from_table(&z4, 0).is_isomorphic(&cyc(4)));
    let v4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    assert!(group_from_table(&v4, 0).is_isomorphic(&AbGroup::direct_sum([&cyc(2), &cyc(2)])));
    let z12: Vec<Vec<usize>> = (0..12).map(|a| (0..12).map(|b| (a + b) % 12).collect()).collect();
    assert!(group_from_table(&z12, 0).is_isomorphic(&cyc(12)));
    assert!(group_from_table(&[vec![0]], 0).is_trivial());
}

#[test]
fn invertibility_examples() {
    let t = tower("S3", 3);
    let c = &t.p_nontrivial.cat;
    let triv = UnitCocycle::trivial(c, 2);
    let line = triv.to_line(c);
    assert!(line.is_invertible(c));
    assert_eq!(line.dual(c).unwrap(), line);

    let mut broken = line.clone();
    let f = (0..c.morphism_count()).find(|&f| !c.is_identity(f)).unwrap();
    broken.maps[f] = None;
    assert!(!broken.is_invertible(c));
    assert!(matches!(broken.dual(c), Err(Error::NotInvertible(_))));
    assert!(matches!(broken.tensor(c, &line), Err(Error::NotInvertible(_))));

    let mut zero_dim = line.clone();
    zero_dim.dims[0] = 0;
    assert!(!zero_dim.is_invertible(c));
}

#[test]
fn cocycles_are_exactly_the_invertible_lines() {
    let t = tower("S3", 3);
    let poset = FinCat::from_poset(3, |a, b| a <= b);
    for c in [&t.p_nontrivial.cat, &t.p_subgroups.cat, &abelian_monoid(2, 1), &poset] {
        for m in 2..=3u64 {
            let n = c.morphism_count();
            for code in 0..m.pow(n as u32) {
                let scalars: Vec<u64> = (0..n).map(|f| code / m.pow(f as u32) % m).collect();
                let l = UnitCocycle { modulus: m, scalars };
                assert_eq!(l.is_cocycle(c), l.to_line(c).is_invertible(c));
            }
        }
    }
}

#[test]
fn character_examples() {
    for (g, m, want) in
        [("S3", 2, 2), ("S3", 3, 1), ("S3", 6, 2), ("A4", 3, 3), ("A4", 2, 1), ("Q8", 2, 4), ("C4", 4, 4), ("C4", 6, 2)]
    {
        let grp = group(g);
        let chis = characters(&grp, m);
        assert_eq!(chis.len(), want, "{g} m={m}");
        for chi in &chis {
            for a in 0..grp.order() {
                for b in 0..grp.order() {
                    assert_eq!(chi[grp.mul(a, b)], (chi[a] + chi[b]) % m);
                }
            }
        }
    }
}

#[test]
fn character_embedding_examples() {
    let e = character_embedding(&group("S3"), 3, 3).unwrap();
    assert_eq!(e.cocycles.len(), 2);
    assert!(e.injective() && e.pairwise_distinct && e.homomorphism);
    assert!(e.ill_defined.is_empty());
    let t = tower("S3", 3);
    let trivial = e.characters.iter().position(|chi| chi.iter().all(|&x| x == 0)).unwrap();
    assert!(cohomologous(&t.p_nontrivial.cat, &e.cocycles[trivial], &UnitCocycle::trivial(&t.p_nontrivial.cat, 2)));

    let e = character_embedding(&group("A4"), 2, 4).unwrap();
    assert_eq!(e.cocycles.len(), 3);
    assert!(e.injective() && e.homomorphism);

    // the sign character does not vanish on the 2-subgroups of S3
    let e = character_embedding(&group("S3"), 2, 3).unwrap();
    assert_eq!(e.cocycles.len(), 1);
    assert_eq!(e.ill_defined.len(), 1);
}

#[test]
fn sylow_trivial_values() {
    let g = Guards::default();
    let cases: &[(&str, u64, u64, u64)] = &[
        ("S3", 3, 3, 2),
        ("S3", 3, 4, 1),
        ("S3", 3, 5, 2),
        ("A4", 2, 4, 3),
        ("A4", 2, 7, 3),
        ("A4", 3, 4, 1),
        ("C4", 2, 3, 1),
        ("Q8", 2, 5, 1),
    ];
    for &(name, p, q, want) in cases {
        let r = sylow_trivial_group(&group(name), p, q, &g).unwrap();
        assert!(r.agree(), "{name} p={p} q={q}: {r:?}");
        assert_eq!(order(&r.bar), want, "{name} p={p} q={q}");
        assert!(want % r.character_image as u64 == 0);
    }
}

#[test]
fn sylow_trivial_battery_agreement() {
    let g = Guards::default();
    for &(name, p, qs) in BATTERY {
        for &q in qs {
            let r = sylow_trivial_group(&group(name), p, q, &g).unwrap();
            assert!(r.agree(), "{name} p={p} q={q}: {r:?}");
            assert_eq!(r.bruteforce.is_none(), r.bruteforce_skipped.is_some());
            assert_eq!(order(&r.bar) % r.character_image as u64, 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Tensor is well defined on classes and the dual is its inverse.
    #[test]
    fn pic_group_laws(i in 0usize..64, j in 0usize..64, mu in prop::collection::vec(0u64..6, 8), which in 0usize..3) {
        let (g, p, m) = [("S3", 3, 2), ("A4", 2, 3), ("A4", 2, 6)][which];
        let t = tower(g, p);
        let sk = skeleton(&t.p_nontrivial.cat).cat;
        let r = pic_bruteforce(&t.p_nontrivial.cat, m, 1 << 24).unwrap();
        let a = &r.classes[i % r.classes.len()];
        let b = &r.classes[j % r.classes.len()];
        let mu: Vec<u64> = mu[..sk.object_count()].iter().map(|x| x % m).collect();
        let a2 = a.twist(&sk, &mu);
        prop_assert!(a2.is_cocycle(&sk));
        prop_assert!(cohomologous(&sk, a, &a2));
        prop_assert!(cohomologous(&sk, &a.tensor(b), &a2.tensor(b)));
        prop_assert!(cohomologous(&sk, &a.tensor(b), &b.tensor(a)));
        prop_assert!(cohomologous(&sk, &a.tensor(&a.dual()), &UnitCocycle::trivial(&sk, m)));
        let la = a.to_line(&sk);
        let lb = b.to_line(&sk);
        let prod = la.tensor(&sk, &lb).unwrap().as_cocycle().unwrap();
        prop_assert!(cohomologous(&sk, &prod, &a.tensor(b)));
    }
}
