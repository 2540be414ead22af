use std::sync::Arc;

use orbit_site::battery::{build_tower, default_battery, pairs, random_coefficients};
use orbit_site::codec::{CategoryJson, IntJson, MatrixJson, OrbitJson, PresheafJson, SieveJson, TopologyJson};
use orbit_site::report::{CheckRecord, GuardOverrides, Outcome, VerificationReport};
use orbit_site_core::group::group_from_spec;
use orbit_site_core::linalg::{Integer, Matrix};
use orbit_site_core::orbit::{OrbitCategory, Variant};
use orbit_site_core::presheaf::{AbPresheaf, SetPresheaf};
use orbit_site_core::site::{all_sieves, sipp_topology};
use orbit_site_core::Guards;
use proptest::prelude::*;
use serde_json::json;

fn g() -> Guards {
    Guards::default()
}

#[test]
fn orbit_categories_round_trip() {
    for variant in [Variant::All, Variant::PSubgroups, Variant::PNontrivial, Variant::PCoprimeIndex] {
        for (name, p) in pairs(&default_battery()) {
            let group = Arc::new(group_from_spec(&name, &g()).unwrap());
            let o = OrbitCategory::new(group, Some(p), variant).unwrap();
            let doc = OrbitJson::from_orbit(&name, &o);
            let text = serde_json::to_string(&doc).unwrap();
            let back: OrbitJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            let o2 = back.to_orbit(&g()).unwrap();
            assert_eq!(o2.cat, o.cat, "{name} {variant:?}");
            assert_eq!(o2.morphism_coset, o.morphism_coset);
        }
    }
}

#[test]
fn tampered_orbit_files_are_rejected() {
    let group = Arc::new(group_from_spec("S3", &g()).unwrap());
    let o = OrbitCategory::new(group, Some(3), Variant::All).unwrap();
    let doc = OrbitJson::from_orbit("S3", &o);

    let mut bad = doc.clone();
    bad.morphism_cosets[3] ^= 1;
    assert!(bad.to_orbit(&g()).is_err());

    let mut bad = doc.clone();
    bad.object_subgroups.swap(1, 4);
    assert!(bad.to_orbit(&g()).is_err());

    let mut bad = doc.clone();
    bad.category.compose.pop();
    assert!(bad.to_orbit(&g()).is_err());

    let mut bad = doc.clone();
    bad.variant = "sideways".into();
    assert!(bad.to_orbit(&g()).is_err());

    let mut bad = doc;
    bad.category.morphisms.swap(0, 1);
    assert!(bad.category.to_cat().is_err());
}

#[test]
fn bare_categories_round_trip() {
    let t = build_tower("A4", 2, &g()).unwrap();
    let c = &t.full.cat;
    let doc = CategoryJson::from_cat(c);
    let back: CategoryJson = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(&back.to_cat().unwrap(), c);
}

#[test]
fn sieves_and_topologies_round_trip() {
    let t = build_tower("S3", 3, &g()).unwrap();
    let c = &t.full.cat;
    for x in 0..c.object_count() {
        for s in all_sieves(c, x, 1 << 12).unwrap() {
            let j = SieveJson::from_sieve(c, &s);
            assert_eq!(j.to_sieve(c).unwrap(), s);
        }
    }
    let top = sipp_topology(&t);
    let j = TopologyJson::from_topology(c, &top);
    let text = serde_json::to_string(&j).unwrap();
    let back: TopologyJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_topology(c).unwrap(), top);

    // G/C3 → G/G without the composite from G/1
    let top_obj = t.top();
    let not_sieve = SieveJson { apex: top_obj, members: vec![(4, c.hom(4, top_obj))] };
    assert!(not_sieve.to_sieve(c).is_err());
    let stray = SieveJson { apex: top_obj, members: vec![(0, vec![c.identity(0)])] };
    assert!(stray.to_sieve(c).is_err());
    let mut wrong = j;
    wrong.min_sieves.pop();
    assert!(wrong.to_topology(c).is_err());
}

#[test]
fn presheaves_round_trip_and_are_validated() {
    for (name, p) in pairs(&default_battery()) {
        let t = build_tower(&name, p, &g()).unwrap();
        let c = &t.full.cat;
        for m in random_coefficients(c, &name, 3) {
            let j = PresheafJson::from_abelian(&m);
            let text = serde_json::to_string(&j).unwrap();
            let back: PresheafJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_abelian(c).unwrap(), m);
            assert!(back.to_set(c).is_err());
        }
    }
    let t = build_tower("S3", 3, &g()).unwrap();
    let c = &t.full.cat;
    let f = SetPresheaf::constant(c, 3);
    assert_eq!(PresheafJson::from_set(&f).to_set(c).unwrap(), f);

    // twisting one restriction map breaks functoriality
    let m = AbPresheaf::constant(c, &orbit_site_core::linalg::AbGroup::cyclic(5));
    let mut j = PresheafJson::from_abelian(&m);
    if let PresheafJson::Abelian { maps, .. } = &mut j {
        let f = (0..c.morphism_count()).find(|&f| !c.is_identity(f)).unwrap();
        maps[f].entries[0][0] = IntJson::Small(2);
    }
    assert!(j.to_abelian(c).is_err());
}

#[test]
fn large_integers_survive() {
    let big: Integer = "123456789012345678901234567890".parse().unwrap();
    let m = Matrix::from_rows(vec![vec![big.clone(), Integer::from(-3)]], 2);
    let j = orbit_site::codec::matrix_to_json(&m);
    assert_eq!(j.entries[0][0], IntJson::Big(big.to_string()));
    let text = serde_json::to_string(&j).unwrap();
    let back: MatrixJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_matrix().unwrap(), m);
    let ragged = MatrixJson { rows: 2, cols: 1, entries: vec![vec![IntJson::Small(1)]] };
    assert!(ragged.to_matrix().is_err());
}

#[test]
fn reports_round_trip() {
    let check = CheckRecord {
        id: "x".into(),
        anchor: "y".into(),
        inputs: json!({ "group": "S3" }),
        outputs: json!([1, 2]),
        outcome: Outcome::Fail,
        witness: Some(json!({ "object": 4 })),
        runtime_ms: Some(3),
    };
    let skipped = CheckRecord { outcome: Outcome::Skipped, witness: None, ..check.clone() };
    let mut r = VerificationReport::new("all", &g(), vec![check, skipped]);
    r.stamp();
    assert_eq!((r.summary.failed, r.summary.skipped, r.passed()), (1, 1, false));
    let text = serde_json::to_string(&r).unwrap();
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    r.strip_timing();
    let v = serde_json::to_value(&r).unwrap();
    assert!(v.get("timestamp").is_none() && v["checks"][0].get("runtime_ms").is_none());
    assert!(r.human().contains("FAIL  x"));
}

#[test]
fn guard_overrides() {
    let o: GuardOverrides = serde_json::from_str(r#"{"max_order": 24, "max_sieves": 7}"#).unwrap();
    let out = o.apply(g());
    assert_eq!((out.max_order, out.max_sieves, out.max_chains), (24, 7, g().max_chains));
    assert!(serde_json::from_str::<GuardOverrides>(r#"{"max_ordre": 24}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_presheaves_round_trip(salt in 0u64..1_000_000, pick in 0usize..4) {
        let (name, p) = [("S3", 3), ("C4", 2), ("A4", 2), ("D8", 2)][pick];
        let t = build_tower(name, p, &g()).unwrap();
        for c in [&t.full.cat, &t.p_nontrivial.cat] {
            for m in random_coefficients(c, "prop", salt) {
                let text = serde_json::to_string(&PresheafJson::from_abelian(&m)).unwrap();
                let back: PresheafJson = serde_json::from_str(&text).unwrap();
                prop_assert_eq!(back.to_abelian(c).unwrap(), m);
            }
        }
    }
}
