mod common;

use common::{battery_towers, random_pair, tower, BATTERY};
use orbit_site_core::cohomology::{ext_over_category, g_m, units, z_linearize};
use orbit_site_core::fincat::{full_subcategory, FinCat};
use orbit_site_core::kan::right_kan;
use orbit_site_core::linalg::AbGroup;
use orbit_site_core::orbit::OrbitTower;
use orbit_site_core::presheaf::{z_constant, AbPresheaf, SetPresheaf};
use orbit_site_core::site::*;
use proptest::prelude::*;

const SIEVES: u64 = 4096;

fn s3() -> OrbitTower {
    tower("S3", 3)
}

/// Objects of `O(S3)`: 1, three C2, C3, S3.
const G1: usize = 0;
const C2: usize = 1;
const C3: usize = 4;
const TOP: usize = 5;

/// Sieves on `x` by brute force: subsets of `into(x)` closed under precomposition.
fn sieves_oracle(c: &FinCat, x: usize) -> Vec<Vec<usize>> {
    let into: Vec<usize> = c.into(x).to_vec();
    assert!(into.len() <= 16);
    (0u32..1 << into.len())
        .filter_map(|mask| {
            let s: Vec<usize> = (0..into.len()).filter(|&i| mask >> i & 1 == 1).map(|i| into[i]).collect();
            let closed = s.iter().all(|&f| c.into(c.dom(f)).iter().all(|&g| s.contains(&c.compose(f, g))));
            closed.then_some(s)
        })
        .collect()
}

/// The two-point presheaf at `G/1` with trivial action, a point elsewhere.
fn two_points_at_bottom(c: &FinCat) -> SetPresheaf {
    let values: Vec<usize> = (0..c.object_count()).map(|x| if x == G1 { 2 } else { 1 }).collect();
    let maps = (0..c.morphism_count()).map(|f| if c.cod(f) == G1 { vec![0, 1] } else { vec![0; 1] }).collect();
    SetPresheaf { values, maps }
}

#[test]
fn generated_and_pulled_back_sieves() {
    let t = s3();
    let c = &t.full.cat;
    for x in 0..c.object_count() {
        assert_eq!(generate_sieve(c, x, &[c.identity(x)]).unwrap(), Sieve::maximal(c, x));
        assert_eq!(generate_sieve(c, x, &[]).unwrap(), Sieve::empty(c, x));
        let max = Sieve::maximal(c, x);
        for &u in c.into(x) {
            assert_eq!(pullback_sieve(c, u, &max).unwrap(), Sieve::maximal(c, c.dom(u)));
        }
    }
    let f = c.hom(G1, TOP)[0];
    let s = generate_sieve(c, TOP, &[f]).unwrap();
    assert_eq!(s.members().collect::<Vec<_>>(), vec![f]);
    assert!(generate_sieve(c, C3, &[f]).is_err());
    assert!(pullback_sieve(c, f, &Sieve::maximal(c, C3)).is_err());

    // G/G is terminal, so pulling back the sieve generated by G/C3 → G/G
    // along G/C2 → G/G leaves exactly the maps from G/1
    let g = c.hom(C3, TOP)[0];
    let s = generate_sieve(c, TOP, &[g]).unwrap();
    let u = c.hom(C2, TOP)[0];
    let pb = pullback_sieve(c, u, &s).unwrap();
    assert_eq!(pb.members().collect::<Vec<_>>(), c.hom(G1, C2));
}

#[test]
fn all_sieves_against_enumeration() {
    for g in ["S3", "C4"] {
        let p = if g == "S3" { 3 } else { 2 };
        let t = tower(g, p);
        let c = &t.full.cat;
        for x in 0..c.object_count() {
            let mut ours: Vec<Vec<usize>> =
                all_sieves(c, x, SIEVES).unwrap().iter().map(|s| s.members().collect()).collect();
            let mut want = sieves_oracle(c, x);
            ours.sort();
            want.sort();
            assert_eq!(ours, want, "{g} object {x}");
            assert!(all_sieves(c, x, SIEVES).unwrap().iter().all(|s| s.is_sieve(c)));
        }
    }
    let t = tower("S3", 3);
    assert!(all_sieves(&t.full.cat, TOP, 2).is_none());
}

#[test]
fn subcategory_topology_examples() {
    let t = s3();
    let c = &t.full.cat;
    let all: Vec<usize> = (0..c.object_count()).collect();
    assert_eq!(subcategory_topology(c, &all), FiniteTopology::minimal(c));

    let sipp = sipp_topology(&t);
    let top: Vec<usize> = sipp.min_sieve(TOP).members().collect();
    assert_eq!(top.len(), 2);
    let mut doms: Vec<usize> = top.iter().map(|&f| c.dom(f)).collect();
    doms.sort();
    assert_eq!(doms, vec![G1, C3]);

    // only G/1: the atomic topology, where exactly the nonempty sieves cover
    let atomic = subcategory_topology(c, &[G1]);
    for x in 0..c.object_count() {
        for s in all_sieves(c, x, SIEVES).unwrap() {
            assert_eq!(atomic.covers(&s), !s.is_empty());
        }
    }
}

#[test]
fn literal_and_factored_subcategory_topologies_agree() {
    for (name, _, t) in battery_towers() {
        let c = &t.full.cat;
        let n = c.object_count();
        for mask in [1u64, 3, 5, (1 << n) - 1, 0b1010_1010 & ((1 << n) - 1)] {
            let d: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
            if d.is_empty() {
                continue;
            }
            assert_eq!(subcategory_topology(c, &d), subcategory_topology_literal(c, &d), "{name} {d:?}");
        }
    }
}

#[test]
fn sipp_sieves_are_sylow_generated() {
    for (name, p, t) in battery_towers() {
        let top = sipp_topology(&t);
        for x in 0..t.full.cat.object_count() {
            assert_eq!(top.min_sieve(x), &sylow_generated_sieve(&t, x), "{name} p={p} object {x}");
        }
    }
}

#[test]
fn topology_axioms() {
    let t = s3();
    let c = &t.full.cat;
    assert_eq!(topology_axioms_check(c, &FiniteTopology::minimal(c), SIEVES), AxiomStatus::Pass);
    assert_eq!(topology_axioms_check(c, &FiniteTopology::maximal(c), SIEVES), AxiomStatus::Pass);
    assert_eq!(topology_axioms_check(c, &sipp_topology(&t), SIEVES), AxiomStatus::Pass);
    let c4 = tower("C4", 2);
    assert_eq!(topology_axioms_check(&c4.full.cat, &sipp_topology(&c4), SIEVES), AxiomStatus::Pass);

    // at G/G keep only the projection from G/1: the pullback along
    // G/C3 → G/G misses the identity of G/C3
    let mut broken = sipp_topology(&t);
    let g = c.hom(G1, TOP)[0];
    broken.min_sieves[TOP] = generate_sieve(c, TOP, &[g]).unwrap();
    match topology_axioms_check(c, &broken, SIEVES) {
        AxiomStatus::Fail(AxiomWitness::Stability { morphism }) => {
            assert_eq!(c.cod(morphism), TOP);
            assert!(broken.pullback_witness(c).is_some());
        }
        other => panic!("{other:?}"),
    }

    let mut not_maximal = FiniteTopology::minimal(c);
    not_maximal.min_sieves[G1] = Sieve::empty(c, C3);
    assert!(matches!(
        topology_axioms_check(c, &not_maximal, SIEVES),
        AxiomStatus::Fail(AxiomWitness::NotASieve { object: G1 })
    ));
}

#[test]
fn topology_axioms_on_battery() {
    for (name, _, t) in battery_towers() {
        let status = topology_axioms_check(&t.full.cat, &sipp_topology(&t), SIEVES);
        assert!(
            matches!(status, AxiomStatus::Pass | AxiomStatus::Partial { pullback_stable: true }),
            "{name}: {status:?}"
        );
    }
}

#[test]
fn sheaf_examples() {
    let t = s3();
    let c = &t.full.cat;
    let sipp = sipp_topology(&t);
    for q in [3, 4, 5] {
        let k = AbPresheaf::constant(c, &units(q));
        assert!(is_sheaf(c, &sipp, &k).is_sheaf);
    }
    // anything is a sheaf for the minimal topology
    let [a, b] = random_pair(c, 7);
    let min = FiniteTopology::minimal(c);
    for m in [&a, &b, &z_constant(c)] {
        assert!(is_sheaf(c, &min, m).is_sheaf);
    }
    // the maximal topology only admits the zero presheaf
    let max = FiniteTopology::maximal(c);
    assert!(!is_sheaf(c, &max, &z_constant(c)).is_sheaf);
    assert!(is_sheaf(c, &max, &AbPresheaf::zero(c)).is_sheaf);
}

#[test]
fn two_point_set_presheaf_is_not_a_sheaf() {
    let t = s3();
    let c = &t.full.cat;
    let sipp = sipp_topology(&t);
    let f = two_points_at_bottom(c);
    assert!(f.is_functorial(c));
    let check = is_sheaf_set(c, &sipp, &f, 1 << 20).unwrap();
    assert!(!check.is_sheaf);
    // the failure sits on a C2 orbit, where three projections from G/1 see
    // two constant families but G/C2 has one point
    let w = check.witness.unwrap();
    assert!((1..=3).contains(&w.apex));
    assert_eq!(matching_families_set(c, sipp.min_sieve(C2), &f, 1 << 20).unwrap().len(), 2);
    // at G/G the member from G/C3 pins the family down
    assert_eq!(matching_families_set(c, sipp.min_sieve(TOP), &f, 1 << 20).unwrap().len(), 1);

    let (fd, fams) = half_sheafify_set(c, &sipp, &f, 1 << 20).unwrap();
    assert!(fd.is_functorial(c));
    assert_eq!(fd.values, vec![2, 2, 2, 2, 1, 1]);
    assert_eq!(fams[C3].len(), 1);
    assert!(is_sheaf_set(c, &sipp, &fd, 1 << 20).unwrap().is_sheaf);

    let point = SetPresheaf::constant(c, 1);
    assert!(is_sheaf_set(c, &sipp, &point, 1 << 20).unwrap().is_sheaf);
    assert!(is_sheaf_set(c, &sipp, &SetPresheaf::constant(c, 2), 1 << 20).unwrap().is_sheaf);
}

#[test]
fn sheafification_examples() {
    let t = s3();
    let c = &t.full.cat;
    let sipp = sipp_topology(&t);
    let k = AbPresheaf::constant(c, &units(4));
    let (kd, unit) = half_sheafify(c, &sipp, &k);
    assert!(unit.is_natural(c, &k, &kd));
    assert!(unit.is_iso(&k, &kd));

    let z = z_constant(c);
    let (zs, unit) = sheafify(c, &sipp, &z);
    assert!(zs.is_functorial(c));
    assert!(unit.is_natural(c, &z, &zs));
    assert!(is_sheaf(c, &sipp, &zs).is_sheaf);
    for &x in &t.p_objects() {
        assert!(unit.component(&z, &zs, x).is_isomorphism());
    }
}

#[test]
fn sheafification_on_battery() {
    for (name, _, t) in battery_towers() {
        let c = &t.full.cat;
        let top = sipp_topology(&t);
        for (seed, m) in random_pair(c, 11).into_iter().enumerate() {
            let (ms, unit) = sheafify(c, &top, &m);
            assert!(ms.is_functorial(c), "{name} {seed}");
            assert!(unit.is_natural(c, &m, &ms), "{name} {seed}");
            assert!(is_sheaf(c, &top, &ms).is_sheaf, "{name} {seed}");
            // a sheaf is fixed
            let (again, u2) = sheafify(c, &top, &ms);
            assert!(u2.is_iso(&ms, &again), "{name} {seed}");
            // restricted to O_p, sheafification changes nothing
            for &x in &t.p_objects() {
                assert!(unit.component(&m, &ms, x).is_isomorphism(), "{name} {seed} {x}");
            }
        }
    }
}

#[test]
fn sheaf_properties_on_battery() {
    for &(name, p, qs) in BATTERY {
        let t = tower(name, p);
        let c = &t.full.cat;
        let top = sipp_topology(&t);
        for &q in qs {
            let k = AbPresheaf::constant(c, &units(q));
            assert!(is_sheaf(c, &top, &k).is_sheaf, "{name} p={p} q={q}");
            let gm = g_m(&t, q);
            assert!(is_sheaf(c, &top, &gm).is_sheaf, "{name} p={p} q={q}");
            for x in 0..c.object_count() {
                let divisible = (t.full.subgroup(x).order() as u64).is_multiple_of(p);
                let want = if divisible { units(q) } else { AbGroup::trivial() };
                assert!(gm.values[x].is_isomorphic(&want), "{name} p={p} q={q} object {x}");
            }
        }
        let d = &t.p_nontrivial.cat;
        for m in random_pair(d, 3) {
            let rk = right_kan(d, c, &t.iota, &m).presheaf;
            assert!(is_sheaf(c, &top, &rk).is_sheaf, "{name} p={p}");
        }
    }
}

#[test]
fn basis_and_exhaustive_sheaf_checks_agree() {
    for g in [("S3", 3), ("C4", 2), ("S3", 2)] {
        let t = tower(g.0, g.1);
        let c = &t.full.cat;
        let n = c.object_count();
        let mut tops = vec![FiniteTopology::minimal(c), FiniteTopology::maximal(c), sipp_topology(&t)];
        for mask in 1u64..(1 << n) {
            let d: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
            tops.push(subcategory_topology(c, &d));
        }
        let mut ms = vec![z_constant(c), AbPresheaf::constant(c, &units(5)), g_m(&t, 4)];
        for seed in 0..4 {
            ms.extend(random_pair(c, seed));
        }
        for top in &tops {
            for m in &ms {
                let basis = is_sheaf(c, top, m).is_sheaf;
                let full = is_sheaf_exhaustive(c, top, m, SIEVES).unwrap().is_sheaf;
                assert_eq!(basis, full, "{g:?}");
            }
        }
    }
}

#[test]
fn matching_families_are_ext_zero() {
    for (name, p, t) in battery_towers() {
        let c = &t.full.cat;
        let top = sipp_topology(&t);
        let mut ms = vec![z_constant(c), g_m(&t, 3)];
        ms.extend(random_pair(c, p));
        for x in 0..c.object_count() {
            let s = top.min_sieve(x);
            let zs = z_linearize(c, s);
            for m in &ms {
                let nat = matching_families(c, s, m).families.group;
                let ext = &ext_over_category(c, &zs, m, 0, 4000).unwrap()[0];
                assert!(nat.is_isomorphic(ext), "{name} object {x}: {nat:?} vs {ext:?}");
            }
        }
    }
}

#[test]
fn dense_subsite_examples() {
    let t = s3();
    let c = &t.full.cat;
    let sipp = sipp_topology(&t);
    assert!(dense_subsite_check(c, &sipp, &t.p_objects()));
    assert!(!dense_subsite_check(c, &sipp, &t.iota.object_map));
    let all: Vec<usize> = (0..c.object_count()).collect();
    assert!(dense_subsite_check(c, &sipp, &all));
    assert!(dense_subsite_check(c, &FiniteTopology::minimal(c), &all));
    assert!(!dense_subsite_check(c, &FiniteTopology::minimal(c), &[G1]));
}

#[test]
fn cocontinuity_and_continuity_examples() {
    let t = s3();
    let c = &t.full.cat;
    let sipp = sipp_topology(&t);
    let (d, beta) = full_subcategory(c, &[C2]).unwrap();
    // the sipp sieve on G/C2 contains no endomorphism of G/C2
    assert!(!is_cocontinuous(&d, &beta, &FiniteTopology::minimal(&d), &sipp));
    assert!(is_cocontinuous(&d, &beta, &FiniteTopology::maximal(&d), &sipp));

    // O_3°(S3) → O(S3) from the minimal topology to sipp
    let dp = &t.p_nontrivial.cat;
    assert!(is_continuous(dp, c, &t.iota, &FiniteTopology::minimal(dp), &sipp));
    assert!(is_cocontinuous(dp, &t.iota, &FiniteTopology::minimal(dp), &sipp));
    // the identity is continuous for any pair with finer target
    let id = orbit_site_core::fincat::FinFunctor::identity(c);
    assert!(is_continuous(c, c, &id, &FiniteTopology::minimal(c), &sipp));
    assert!(!is_continuous(c, c, &id, &sipp, &FiniteTopology::minimal(c)));
}

#[test]
fn induced_topology_examples() {
    let t = s3();
    let c = &t.full.cat;
    let sipp = sipp_topology(&t);
    let induced = sipp.induced(&t.p_subgroups.cat, &t.incl_p);
    assert_eq!(induced, FiniteTopology::minimal(&t.p_subgroups.cat));
    let id = orbit_site_core::fincat::FinFunctor::identity(c);
    assert_eq!(sipp.induced(c, &id), sipp);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Subcategory topologies satisfy the axioms and the two sheaf checks agree.
    #[test]
    fn subcategory_topologies_are_topologies(mask in 1u64..64, seed in 0u64..1000) {
        let t = tower("S3", 3);
        let c = &t.full.cat;
        let d: Vec<usize> = (0..6).filter(|&x| mask >> x & 1 == 1).collect();
        let top = subcategory_topology(c, &d);
        prop_assert_eq!(topology_axioms_check(c, &top, SIEVES), AxiomStatus::Pass);
        for m in random_pair(c, seed) {
            let basis = is_sheaf(c, &top, &m).is_sheaf;
            prop_assert_eq!(basis, is_sheaf_exhaustive(c, &top, &m, SIEVES).unwrap().is_sheaf);
            let (ms, _) = sheafify(c, &top, &m);
            prop_assert!(is_sheaf(c, &top, &ms).is_sheaf);
        }
    }
}
