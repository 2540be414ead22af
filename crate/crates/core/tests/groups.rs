mod common;

use std::collections::BTreeSet;

use common::group;
use orbit_site_core::fincat::validate_category;
use orbit_site_core::group::{group_from_spec, parse_cycles, Perm, PermGroup, Subgroup};
use orbit_site_core::orbit::{aut_check, hom_orbit, OrbitCategory, OrbitTower, Variant};
use orbit_site_core::{Error, Guards};

fn compose(a: &[u8], b: &[u8]) -> Perm {
    a.iter().map(|&i| b[i as usize]).collect()
}

/// Closure by repeated right multiplication until nothing new appears.
fn closure_oracle(gens: &[Perm], degree: usize) -> BTreeSet<Perm> {
    let mut set: BTreeSet<Perm> = BTreeSet::from([(0..degree as u8).collect()]);
    loop {
        let new: Vec<Perm> =
            set.iter().flat_map(|x| gens.iter().map(move |g| compose(x, g))).filter(|y| !set.contains(y)).collect();
        if new.is_empty() {
            return set;
        }
        set.extend(new);
    }
}

fn member_perms(g: &PermGroup, h: &Subgroup) -> BTreeSet<Perm> {
    h.members().iter().map(|i| g.element(i).clone()).collect()
}

/// Every subset closed under composition, by exhaustive search.
fn subgroups_by_subsets(g: &PermGroup) -> BTreeSet<BTreeSet<Perm>> {
    let els = g.elements();
    let n = els.len();
    assert!(n <= 12);
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let s: BTreeSet<Perm> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| els[i].clone()).collect();
        if s.iter().all(|a| s.iter().all(|b| s.contains(&compose(a, b)))) {
            out.insert(s);
        }
    }
    out
}

/// Closures of all pairs of elements; complete for groups whose subgroups
/// are 2-generated.
fn subgroups_by_pairs(g: &PermGroup) -> BTreeSet<BTreeSet<Perm>> {
    let els = g.elements();
    let mut out = BTreeSet::new();
    for a in els {
        for b in els {
            out.insert(closure_oracle(&[a.clone(), b.clone()], g.degree()));
        }
    }
    out
}

fn library_subgroups(g: &PermGroup) -> BTreeSet<BTreeSet<Perm>> {
    g.all_subgroups().iter().map(|h| member_perms(g, h)).collect()
}

#[test]
fn catalog_orders() {
    for (spec, n) in [
        ("symmetric 3", 6),
        ("cyclic 1", 1),
        ("S4", 24),
        ("A4", 12),
        ("Q8", 8),
        ("D8", 8),
        ("dihedral 4", 8),
        ("klein four", 4),
        ("C4", 4),
        ("C2 x C3", 6),
    ] {
        assert_eq!(group(spec).order(), n, "{spec}");
    }
}

#[test]
fn explicit_generators_match_closure() {
    let g = group("gens 4: (0 1 2 3), (0 2)");
    assert_eq!(g.order(), 8);
    let gens = vec![parse_cycles("(0 1 2 3)", 4).unwrap(), parse_cycles("(0 2)", 4).unwrap()];
    let oracle = closure_oracle(&gens, 4);
    let elements: BTreeSet<Perm> = g.elements().iter().cloned().collect();
    assert_eq!(elements, oracle);
}

#[test]
fn multiplication_table_matches_composition() {
    for spec in ["S4", "Q8", "A4"] {
        let g = group(spec);
        assert_eq!(g.element(0), &(0..g.degree() as u8).collect::<Perm>());
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..g.order() {
                assert_eq!(g.element(g.mul(a, b)), &compose(g.element(a), g.element(b)));
            }
        }
    }
}

#[test]
fn subgroup_enumeration_against_subsets() {
    for (spec, count) in [("S3", 6), ("A4", 10), ("C4", 3), ("Q8", 6), ("D8", 10), ("C5", 2), ("C2 x C2", 5)] {
        let g = group(spec);
        assert_eq!(g.all_subgroups().len(), count, "{spec}");
        if g.order() <= 12 {
            assert_eq!(library_subgroups(&g), subgroups_by_subsets(&g), "{spec}");
        }
    }
}

#[test]
fn subgroup_enumeration_s4_against_pairs() {
    let g = group("S4");
    assert_eq!(g.all_subgroups().len(), 30);
    assert_eq!(library_subgroups(&g), subgroups_by_pairs(&g));
}

#[test]
fn subgroups_are_canonically_ordered() {
    let g = group("S4");
    let subs = g.all_subgroups();
    for (i, h) in subs.iter().enumerate() {
        assert_eq!(h.canonical_id, i);
    }
    for w in subs.windows(2) {
        let key = |h: &Subgroup| (h.order(), h.members().iter().collect::<Vec<_>>());
        assert!(key(&w[0]) < key(&w[1]));
    }
    assert_eq!(g.trivial_subgroup().order(), 1);
    assert_eq!(g.whole().order(), 24);
}

fn by_order(g: &PermGroup, n: usize) -> Vec<&Subgroup> {
    g.all_subgroups().iter().filter(|h| h.order() == n).collect()
}

#[test]
fn sylow_examples() {
    let s3 = group("S3");
    let whole = s3.whole();
    let c3 = s3.sylow_subgroup(whole, 3).unwrap();
    assert_eq!(c3.order(), 3);
    assert_eq!(by_order(&s3, 3), vec![c3]);
    assert_eq!(s3.sylow_subgroup(whole, 5).unwrap().order(), 1);
    assert_eq!(s3.sylow_subgroup(whole, 4), Err(Error::NotPrime(4)));

    let s4 = group("S4");
    let d8 = s4.sylow_subgroup(s4.whole(), 2).unwrap();
    let order8 = by_order(&s4, 8);
    assert_eq!(order8.len(), 3);
    assert_eq!(d8, order8.iter().min_by_key(|h| h.canonical_id).copied().unwrap());
    assert_eq!(s4.sylow_subgroups(s4.whole(), 2).len(), 3);
    assert_eq!(s4.sylow_subgroups(s4.whole(), 3).len(), 4);
}

/// `{g : g⁻¹Hg = H}` computed on permutations directly.
fn normalizer_oracle(g: &PermGroup, h: &Subgroup) -> BTreeSet<Perm> {
    let hs = member_perms(g, h);
    g.elements()
        .iter()
        .filter(|x| {
            let xi = g.element(g.inv(g.index_of(x).unwrap())).clone();
            hs.iter().all(|m| hs.contains(&compose(&compose(&xi, m), x)))
        })
        .cloned()
        .collect()
}

#[test]
fn normalizers() {
    for spec in ["S3", "A4", "S4", "D8"] {
        let g = group(spec);
        for h in g.all_subgroups() {
            assert_eq!(member_perms(&g, g.normalizer(h)), normalizer_oracle(&g, h), "{spec} {}", h.canonical_id);
        }
    }
    let s3 = group("S3");
    let c3 = by_order(&s3, 3)[0];
    assert_eq!(s3.normalizer(c3), s3.whole());
    assert_eq!(s3.normalizer(s3.whole()), s3.whole());
    let t = parse_cycles("(0 1)", 3).unwrap();
    let c2 = s3.subgroup_by_members(&s3.closure(&[s3.index_of(&t).unwrap()])).unwrap();
    assert_eq!(s3.normalizer(c2), c2);
}

#[test]
fn coprime_index() {
    let s3 = group("S3");
    let c3 = by_order(&s3, 3)[0];
    let c2 = by_order(&s3, 2)[0];
    assert_eq!(s3.p_part_coprime_index(s3.whole(), c3, 3), Ok(true));
    assert_eq!(s3.p_part_coprime_index(s3.whole(), c2, 3), Ok(false));
    assert_eq!(s3.p_part_coprime_index(c2, c2, 3), Ok(true));
    assert_eq!(s3.p_part_coprime_index(c2, c3, 3), Err(Error::NotASubgroupPair));
}

#[test]
fn descriptor_errors() {
    let g = Guards::default();
    assert!(matches!(group_from_spec("frobnicate 3", &g), Err(Error::BadDescriptor(_))));
    assert!(matches!(group_from_spec("(0 1 0)", &g), Err(Error::MalformedPermutation(_))));
    let small = Guards { max_order: 100, ..Guards::default() };
    assert!(matches!(group_from_spec("S5", &small), Err(Error::OrderGuardExceeded { .. })));
    let narrow = Guards { max_degree: 3, ..Guards::default() };
    assert!(matches!(group_from_spec("S4", &narrow), Err(Error::DegreeGuardExceeded { .. })));
}

/// `|{gK : g⁻¹Hg ⊆ K}|` by listing cosets as sets.
fn hom_count_oracle(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> usize {
    let mut cosets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for x in 0..g.order() {
        if h.members().iter().all(|m| k.contains(g.conj(m, x))) {
            cosets.insert(k.members().iter().map(|y| g.mul(x, y)).collect());
        }
    }
    cosets.len()
}

#[test]
fn hom_orbit_against_coset_enumeration() {
    for spec in ["S3", "A4", "S4", "Q8"] {
        let g = group(spec);
        for h in g.all_subgroups() {
            for k in g.all_subgroups() {
                assert_eq!(hom_orbit(&g, h, k).len(), hom_count_oracle(&g, h, k));
            }
            assert_eq!(hom_orbit(&g, h, g.whole()).len(), 1);
            assert_eq!(hom_orbit(&g, g.trivial_subgroup(), h).len(), g.order() / h.order());
        }
    }
    let s3 = group("S3");
    let c3 = by_order(&s3, 3)[0];
    let c2 = by_order(&s3, 2)[0];
    assert_eq!(hom_orbit(&s3, c3, c3).len(), 2);
    assert!(hom_orbit(&s3, c2, c3).is_empty());
}

#[test]
fn orbit_category_examples() {
    let s3 = group("S3");
    let o = OrbitCategory::new(s3.clone(), Some(3), Variant::PNontrivial).unwrap();
    assert_eq!((o.cat.object_count(), o.cat.morphism_count()), (1, 2));

    let all = OrbitCategory::new(s3.clone(), None, Variant::All).unwrap();
    assert_eq!(all.cat.object_count(), 6);
    let g1 = all.object_of(s3.trivial_subgroup().canonical_id).unwrap();
    for x in 0..6 {
        assert_eq!(all.cat.hom(g1, x).len(), 6 / all.subgroup(x).order());
    }

    let a4 = group("A4");
    let o = OrbitCategory::new(a4.clone(), Some(2), Variant::PNontrivial).unwrap();
    assert_eq!(o.cat.object_count(), 4);
    let v4 = (0..4).find(|&x| o.subgroup(x).order() == 4).unwrap();
    for x in (0..4).filter(|&x| x != v4) {
        assert_eq!(o.cat.hom(x, v4).len(), 3);
    }

    assert_eq!(OrbitCategory::new(s3, Some(5), Variant::PNontrivial).unwrap_err(), Error::EmptyCategory);
}

#[test]
fn orbit_categories_are_categories() {
    for spec in ["S3", "A4", "S4", "Q8", "D8", "C4"] {
        let g = group(spec);
        let o = OrbitCategory::new(g.clone(), None, Variant::All).unwrap();
        assert_eq!(validate_category(&o.cat), None, "{spec}");
        let report = aut_check(&o);
        assert!(report.passed(), "{spec}: {:?}", report.first_mismatch());
        let top = o.cat.object_count() - 1;
        assert_eq!(o.subgroup(top).order(), g.order());
        assert_eq!(o.cat.terminal_object(), Some(top));
    }
}

#[test]
fn automorphism_examples() {
    let s3 = group("S3");
    let o = OrbitCategory::new(s3.clone(), None, Variant::All).unwrap();
    let c3 = o.object_of(by_order(&s3, 3)[0].canonical_id).unwrap();
    let top = o.cat.object_count() - 1;
    let rec = |o: &OrbitCategory, x: usize| aut_check(o).records.into_iter().find(|r| r.object == x).unwrap();
    assert_eq!(rec(&o, c3).automorphisms, 2);
    assert_eq!(rec(&o, top).automorphisms, 1);

    let a4 = group("A4");
    let o = OrbitCategory::new(a4.clone(), Some(2), Variant::PNontrivial).unwrap();
    let v4 = (0..o.cat.object_count()).find(|&x| o.subgroup(x).order() == 4).unwrap();
    assert_eq!(rec(&o, v4).automorphisms, 3);
}

#[test]
fn composition_follows_coset_products() {
    let g = group("S4");
    let o = OrbitCategory::new(g.clone(), None, Variant::All).unwrap();
    let c = &o.cat;
    for f in 0..c.morphism_count() {
        for &h in c.out_of(c.cod(f)) {
            let hf = c.compose(h, f);
            let k = o.subgroup(c.cod(h));
            let prod = g.mul(o.morphism_coset[f], o.morphism_coset[h]);
            let rep = k.members().iter().map(|y| g.mul(prod, y)).min().unwrap();
            assert_eq!(o.morphism_coset[hf], rep);
        }
    }
}

#[test]
fn tower_of_s4_at_two() {
    let t = OrbitTower::new(group("S4"), 2).unwrap();
    // nine C2, four V4, three C4, three D8
    assert_eq!(t.p_nontrivial.cat.object_count(), 19);
    assert_eq!(t.p_subgroups.cat.object_count(), 20);
    assert!(t.iota.is_valid(&t.p_nontrivial.cat, &t.full.cat));
    assert!(t.iota.is_fully_faithful(&t.p_nontrivial.cat, &t.full.cat));
    assert!(t.iota_p.is_valid(&t.p_nontrivial.cat, &t.p_subgroups.cat));
    assert!(t.incl_p.is_valid(&t.p_subgroups.cat, &t.full.cat));
    assert_eq!(t.top(), t.full.cat.object_count() - 1);
}

#[test]
fn coprime_index_variant() {
    let s3 = group("S3");
    let o = OrbitCategory::new(s3, Some(3), Variant::PCoprimeIndex).unwrap();
    // C3 and S3
    assert_eq!(o.cat.object_count(), 2);
    let s4 = group("S4");
    let o = OrbitCategory::new(s4, Some(2), Variant::PCoprimeIndex).unwrap();
    // D8 (three), S4
    assert_eq!(o.cat.object_count(), 4);
}
