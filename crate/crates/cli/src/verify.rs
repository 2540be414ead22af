//! The verification suites, one function per acceptance criterion.

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use orbit_site_core::cohomology::{
    category_cohomology, category_cohomology_full, edge_map_check, ext_comparison_check, ext_over_category, g_m,
    leray_vanishing_check, resolve_by_representables, sipp_cech_check, units, z_linearize,
};
use orbit_site_core::fincat::skeleton;
use orbit_site_core::group::p_part;
use orbit_site_core::kan::right_kan;
use orbit_site_core::linalg::{smith_normal_form, AbGroup, Integer, Matrix};
use orbit_site_core::orbit::OrbitTower;
use orbit_site_core::picard::{character_embedding, sylow_trivial_group};
use orbit_site_core::presheaf::{z_constant, AbPresheaf};
use orbit_site_core::site::{
    is_sheaf, is_sheaf_exhaustive, matching_families, sipp_topology, subcategory_topology,
    subcategory_topology_literal, sylow_generated_sieve, FiniteTopology,
};
use orbit_site_core::{Error, Guards};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::battery::{build_tower, pairs, random_coefficients, Case};
use crate::codec::invariant_factors;
use crate::report::{CheckRecord, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    TheoremA,
    TopologyId,
    SheafProps,
    TheoremB,
    Leray,
    ExtComparison,
    Infrastructure,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::TheoremA => "theorem-a",
            Suite::TopologyId => "topology-id",
            Suite::SheafProps => "sheaf-props",
            Suite::TheoremB => "theorem-b",
            Suite::Leray => "leray",
            Suite::ExtComparison => "ext-comparison",
            Suite::Infrastructure => "infrastructure",
            Suite::All => "all",
        }
    }

    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::TheoremA => &[1],
            Suite::TopologyId => &[2],
            Suite::SheafProps => &[3],
            Suite::TheoremB => &[4, 7],
            Suite::Leray => &[5, 6],
            Suite::ExtComparison => &[9],
            Suite::Infrastructure => &[8],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9],
        }
    }
}

pub fn run_suite(suite: Suite, cases: &[Case], guards: &Guards) -> Vec<CheckRecord> {
    suite.criteria().iter().flat_map(|&k| run_criterion(k, cases, guards)).collect()
}

pub fn run_criterion(k: u8, cases: &[Case], guards: &Guards) -> Vec<CheckRecord> {
    match k {
        1 => per_case(cases, guards, theorem_a),
        2 => per_pair(cases, guards, topology_id),
        3 => per_pair(cases, guards, sheaf_props),
        4 => per_case(cases, guards, theorem_b),
        5 => per_case(cases, guards, leray),
        6 => per_case(cases, guards, edge_map),
        7 => per_case(cases, guards, characters),
        8 => infrastructure(cases, guards),
        9 => per_case(cases, guards, ext_comparison),
        _ => Vec::new(),
    }
}

/// Builder for one check record.
struct Check {
    id: String,
    anchor: &'static str,
    inputs: Value,
    start: Instant,
}

impl Check {
    fn new(id: String, anchor: &'static str, inputs: Value) -> Self {
        Check { id, anchor, inputs, start: Instant::now() }
    }

    fn finish(self, outcome: Outcome, outputs: Value, witness: Option<Value>) -> CheckRecord {
        CheckRecord {
            id: self.id,
            anchor: self.anchor.into(),
            inputs: self.inputs,
            outputs,
            outcome,
            witness,
            runtime_ms: Some(self.start.elapsed().as_millis() as u64),
        }
    }

    fn verdict(self, pass: bool, outputs: Value, witness: impl FnOnce() -> Value) -> CheckRecord {
        if pass {
            self.finish(Outcome::Pass, outputs, None)
        } else {
            let w = witness();
            self.finish(Outcome::Fail, outputs, Some(w))
        }
    }

    /// A guard error becomes a skip; anything else fails the check.
    fn error(self, e: &Error) -> CheckRecord {
        let outcome = if e.is_guard() { Outcome::Skipped } else { Outcome::Fail };
        self.finish(outcome, Value::Null, Some(json!({ "error": e.to_string() })))
    }
}

fn case_inputs(c: &Case) -> Value {
    json!({ "group": c.group, "p": c.p, "q": c.q })
}

fn ifs(g: &AbGroup) -> Value {
    json!(invariant_factors(g))
}

fn per_case(
    cases: &[Case],
    guards: &Guards,
    f: fn(&Case, &OrbitTower, &Guards) -> Vec<CheckRecord>,
) -> Vec<CheckRecord> {
    cases
        .par_iter()
        .map(|c| match build_tower(&c.group, c.p, guards) {
            Ok(t) => f(c, &t, guards),
            Err(e) => vec![Check::new(format!("tower/{}", c.label()), "orbit categories", case_inputs(c)).error(&e)],
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn per_pair(
    cases: &[Case],
    guards: &Guards,
    f: fn(&str, u64, &[u64], &OrbitTower, &Guards) -> Vec<CheckRecord>,
) -> Vec<CheckRecord> {
    let ps = pairs(cases);
    ps.par_iter()
        .map(|(g, p)| {
            let qs: Vec<u64> = cases.iter().filter(|c| c.group == *g && c.p == *p).map(|c| c.q).collect();
            match build_tower(g, *p, guards) {
                Ok(t) => f(g, *p, &qs, &t, guards),
                Err(e) => {
                    vec![Check::new(format!("tower/{g} p={p}"), "orbit categories", json!({ "group": g, "p": p }))
                        .error(&e)]
                }
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Coefficients on `O_p°(G)`: the constant units and two seeded random
/// presheaves.
fn battery_coefficients(c: &Case, t: &OrbitTower) -> Vec<(String, AbPresheaf)> {
    let d = &t.p_nontrivial.cat;
    let [a, b] = random_coefficients(d, &format!("{} p={}", c.group, c.p), 0);
    vec![
        (format!("constant Z/{}", c.q - 1), AbPresheaf::constant(d, &units(c.q))),
        ("random reduction".into(), a),
        ("random inclusion".into(), b),
    ]
}

fn with_coeff(c: &Case, name: &str) -> Value {
    json!({ "group": c.group, "p": c.p, "q": c.q, "coefficient": name })
}

const ANCHOR_A: &str = "Čech cohomology of the sipp cover of G/G with RK coefficients is H^i(O_p°(G), M)";

fn theorem_a(c: &Case, t: &OrbitTower, guards: &Guards) -> Vec<CheckRecord> {
    battery_coefficients(c, t)
        .into_iter()
        .map(|(name, m)| {
            let ck = Check::new(format!("theorem-a/{}/{name}", c.label()), ANCHOR_A, with_coeff(c, &name));
            match sipp_cech_check(t, &m, 2, guards) {
                Ok(r) => {
                    let degrees: Vec<Value> = r
                        .degrees
                        .iter()
                        .map(|d| json!({ "degree": d.degree, "ext": ifs(&d.left), "bar": ifs(&d.right) }))
                        .collect();
                    let skipped: Vec<Value> =
                        r.skipped.iter().map(|(i, why)| json!({ "degree": i, "guard": why })).collect();
                    let outputs = json!({ "degrees": degrees, "skipped": skipped });
                    let low_missing = r.degrees.len() < 2;
                    if r.passed() && low_missing {
                        return ck.finish(Outcome::Skipped, outputs, Some(json!({ "skipped": skipped })));
                    }
                    let bad = r.degrees.iter().find(|d| !d.agree()).map(|d| d.degree);
                    ck.verdict(r.passed(), outputs, || json!({ "degree": bad }))
                }
                Err(e) => ck.error(&e),
            }
        })
        .collect()
}

const ANCHOR_TOP: &str = "the subcategory topology of O_p(G) is the sipp topology";

fn topology_id(g: &str, p: u64, _qs: &[u64], t: &OrbitTower, _guards: &Guards) -> Vec<CheckRecord> {
    let c = &t.full.cat;
    let d = t.p_objects();
    let factored = subcategory_topology(c, &d);
    let literal = subcategory_topology_literal(c, &d);
    (0..c.object_count())
        .map(|x| {
            let ck = Check::new(
                format!("topology-id/{g} p={p}/{}", c.object_label(x)),
                ANCHOR_TOP,
                json!({ "group": g, "p": p, "object": x }),
            );
            let sylow = sylow_generated_sieve(t, x);
            let s = factored.min_sieve(x);
            let pass = *s == sylow && *literal.min_sieve(x) == sylow;
            let outputs = json!({
                "subcategory_sieve": s.members().collect::<Vec<_>>(),
                "sylow_sieve": sylow.members().collect::<Vec<_>>(),
            });
            ck.verdict(pass, outputs, || json!({ "object": x }))
        })
        .collect()
}

const ANCHOR_UNITS: &str = "constant k^× is a sipp-sheaf";
const ANCHOR_RK: &str = "RK_ι M is a sipp-sheaf";
const ANCHOR_GM: &str = "G_m(G/H) is k^× if p divides |H| and zero otherwise";

fn sheaf_props(g: &str, p: u64, qs: &[u64], t: &OrbitTower, _guards: &Guards) -> Vec<CheckRecord> {
    let c = &t.full.cat;
    let top = sipp_topology(t);
    let base = json!({ "group": g, "p": p });
    let mut out = Vec::new();
    let sheaf_record = |id: String, anchor: &'static str, inputs: Value, m: &AbPresheaf| {
        let ck = Check::new(id, anchor, inputs);
        let r = is_sheaf(c, &top, m);
        let witness = r.witness.as_ref().map(|s| json!({ "apex": s.apex, "sieve": s.members().collect::<Vec<_>>() }));
        ck.verdict(r.is_sheaf, json!({ "is_sheaf": r.is_sheaf }), || witness.unwrap_or(Value::Null))
    };
    for &q in qs {
        out.push(sheaf_record(
            format!("sheaf-props/{g} p={p}/constant Z/{}", q - 1),
            ANCHOR_UNITS,
            json!({ "group": g, "p": p, "q": q }),
            &AbPresheaf::constant(c, &units(q)),
        ));
    }
    let d = &t.p_nontrivial.cat;
    let [a, b] = random_coefficients(d, &format!("{g} p={p}"), 0);
    for (name, m) in [("random reduction", a), ("random inclusion", b)] {
        let rk = right_kan(d, c, &t.iota, &m).presheaf;
        out.push(sheaf_record(format!("sheaf-props/{g} p={p}/RK {name}"), ANCHOR_RK, base.clone(), &rk));
    }
    for &q in qs {
        let gm = g_m(t, q);
        out.push(sheaf_record(
            format!("sheaf-props/{g} p={p}/G_m q={q}"),
            ANCHOR_RK,
            json!({ "group": g, "p": p, "q": q }),
            &gm,
        ));
        let ck = Check::new(
            format!("sheaf-props/{g} p={p}/G_m values q={q}"),
            ANCHOR_GM,
            json!({ "group": g, "p": p, "q": q }),
        );
        let expected: Vec<AbGroup> = (0..c.object_count())
            .map(|x| if p_part(t.full.subgroup(x).order(), p) > 1 { units(q) } else { AbGroup::trivial() })
            .collect();
        let bad: Vec<usize> = (0..c.object_count()).filter(|&x| !gm.values[x].is_isomorphic(&expected[x])).collect();
        let outputs = json!({ "values": gm.values.iter().map(ifs).collect::<Vec<_>>() });
        out.push(ck.verdict(bad.is_empty(), outputs, || json!({ "objects": bad })));
    }
    out
}

const ANCHOR_B: &str = "T_k(G,P) is Pic of the constant presheaf on O_p°(G)";

fn theorem_b(c: &Case, t: &OrbitTower, guards: &Guards) -> Vec<CheckRecord> {
    let ck = Check::new(format!("theorem-b/{}", c.label()), ANCHOR_B, case_inputs(c));
    let r = match sylow_trivial_group(&t.full.group, c.p, c.q, guards) {
        Ok(r) => r,
        Err(e) => return vec![ck.error(&e)],
    };
    let is_p_group = t.full.group.order() == p_part(t.full.group.order(), c.p);
    let value_ok = !is_p_group || r.bar.is_trivial();
    let outputs = json!({
        "bar": ifs(&r.bar),
        "cech_ext": ifs(&r.cech_ext),
        "bruteforce": r.bruteforce.as_ref().map(ifs),
        "bruteforce_skipped": r.bruteforce_skipped,
        "agree": r.agree(),
    });
    let pass = r.agree() && value_ok;
    vec![ck.verdict(pass, outputs, || json!({ "paths_agree": r.agree(), "p_group_trivial": value_ok }))]
}

const ANCHOR_CHAR: &str = "Hom(G, k^×) embeds in Pic";

fn characters(c: &Case, _t: &OrbitTower, guards: &Guards) -> Vec<CheckRecord> {
    let ck = Check::new(format!("character/{}", c.label()), ANCHOR_CHAR, case_inputs(c));
    let group = &_t.full.group;
    let e = match character_embedding(group, c.p, c.q) {
        Ok(e) => e,
        Err(e) => return vec![ck.error(&e)],
    };
    let pic = match orbit_site_core::picard::h1_units(group, c.p, c.q, guards) {
        Ok(g) => g,
        Err(err) => return vec![ck.error(&err)],
    };
    let order = pic.order().and_then(|o| num_traits::ToPrimitive::to_usize(&o));
    let fits = order.is_some_and(|o| o % e.cocycles.len().max(1) == 0);
    let outputs = json!({
        "image_order": e.cocycles.len(),
        "pic_order": order,
        "ill_defined": e.ill_defined.len(),
        "pairwise_distinct": e.pairwise_distinct,
        "homomorphism": e.homomorphism,
    });
    let pass = e.pairwise_distinct && e.homomorphism && fits;
    vec![ck.verdict(
        pass,
        outputs,
        || json!({ "pairwise_distinct": e.pairwise_distinct, "homomorphism": e.homomorphism, "divides_pic": fits }),
    )]
}

const ANCHOR_LERAY: &str = "H¹(O_p(G), R¹I_* M) vanishes";

fn leray(c: &Case, t: &OrbitTower, guards: &Guards) -> Vec<CheckRecord> {
    battery_coefficients(c, t)
        .into_iter()
        .map(|(name, m)| {
            let ck = Check::new(format!("leray/{}/{name}", c.label()), ANCHOR_LERAY, with_coeff(c, &name));
            match leray_vanishing_check(t, &m, guards) {
                Ok(r) => {
                    let outputs = json!({
                        "r1_values": r.r1_values.iter().map(ifs).collect::<Vec<_>>(),
                        "h1": ifs(&r.h1),
                    });
                    ck.verdict(r.vanishes(), outputs, || json!({ "h1": ifs(&r.h1) }))
                }
                Err(e) => ck.error(&e),
            }
        })
        .collect()
}

const ANCHOR_EDGE: &str = "the restriction H^i(O_p(G), RK_ι M) → H^i(O_p°(G), M) is an isomorphism";

fn edge_map(c: &Case, t: &OrbitTower, guards: &Guards) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (name, m) in battery_coefficients(c, t) {
        for i in 0..=1 {
            let mut inputs = with_coeff(c, &name);
            inputs["degree"] = json!(i);
            let ck = Check::new(format!("edge/{}/{name}/H{i}", c.label()), ANCHOR_EDGE, inputs);
            out.push(match edge_map_check(t, &m, i, guards) {
                Ok(r) => {
                    let outputs = json!({
                        "source": ifs(&r.source),
                        "target": ifs(&r.target),
                        "injective": r.injective,
                        "surjective": r.surjective,
                    });
                    ck.verdict(
                        r.is_iso(),
                        outputs,
                        || json!({ "degree": i, "injective": r.injective, "surjective": r.surjective }),
                    )
                }
                Err(e) => ck.error(&e),
            });
        }
    }
    out
}

const ANCHOR_EXT: &str = "Ext¹(Q, M̂) over O(G) is Ext¹(Z̄, M̂) over the coprime-index orbit category";

/// `M̂` on `O(G)`: constant `Z`, constant units, `G_m`, and the right Kan
/// extensions of the random presheaves.
fn ext_comparison(c: &Case, t: &OrbitTower, guards: &Guards) -> Vec<CheckRecord> {
    let o = &t.full.cat;
    let d = &t.p_nontrivial.cat;
    let mut coeffs = vec![
        ("constant Z".to_string(), z_constant(o)),
        (format!("constant Z/{}", c.q - 1), AbPresheaf::constant(o, &units(c.q))),
        ("G_m".into(), g_m(t, c.q)),
    ];
    let [a, b] = random_coefficients(d, &format!("{} p={}", c.group, c.p), 0);
    coeffs.push(("RK random reduction".into(), right_kan(d, o, &t.iota, &a).presheaf));
    coeffs.push(("RK random inclusion".into(), right_kan(d, o, &t.iota, &b).presheaf));
    coeffs
        .into_iter()
        .map(|(name, m)| {
            let ck = Check::new(format!("ext-comparison/{}/{name}", c.label()), ANCHOR_EXT, with_coeff(c, &name));
            match ext_comparison_check(t, &m, guards) {
                Ok(r) => {
                    let outputs = json!({
                        "orbit": ifs(&r.comparison.left),
                        "coprime_index": ifs(&r.comparison.right),
                        "exact_sequence": r.exact_sequence,
                    });
                    ck.verdict(r.passed(), outputs, || json!({ "degree": 1, "exact_sequence": r.exact_sequence }))
                }
                Err(e) => ck.error(&e),
            }
        })
        .collect()
}

const ANCHOR_INFRA: &str = "exact integer algebra and site machinery";

pub const SNF_CASES: usize = 500;

fn random_matrix(rng: &mut ChaCha8Rng) -> Matrix {
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let rows = (0..r).map(|_| (0..c).map(|_| Integer::from(rng.gen_range(-20i64..=20))).collect()).collect();
    Matrix::from_rows(rows, c)
}

fn is_unimodular(m: &Matrix) -> bool {
    m.rows() == m.cols() && m.determinant().abs().is_one()
}

fn snf_valid(a: &Matrix) -> bool {
    let s = smith_normal_form(a);
    let n = a.rows().min(a.cols());
    let diagonal = (0..a.rows()).all(|i| (0..a.cols()).all(|j| i == j || s.d.get(i, j).is_zero()));
    let chain = (0..n).all(|i| {
        let di = s.d.get(i, i);
        !di.is_negative()
            && (i + 1 >= n
                || (di.is_zero() && s.d.get(i + 1, i + 1).is_zero())
                || (!di.is_zero() && (s.d.get(i + 1, i + 1) % di).is_zero()))
    });
    diagonal && chain && is_unimodular(&s.u) && is_unimodular(&s.v) && s.u.mul(a).mul(&s.v) == s.d
}

fn infrastructure(cases: &[Case], guards: &Guards) -> Vec<CheckRecord> {
    let mut out = Vec::new();

    let ck = Check::new("infrastructure/snf".into(), ANCHOR_INFRA, json!({ "cases": SNF_CASES, "seed": 8 }));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let matrices: Vec<Matrix> = (0..SNF_CASES).map(|_| random_matrix(&mut rng)).collect();
    let bad: Vec<usize> = matrices.par_iter().enumerate().filter(|(_, a)| !snf_valid(a)).map(|(i, _)| i).collect();
    out.push(ck.verdict(bad.is_empty(), json!({ "failures": bad.len() }), || json!({ "cases": bad })));

    let per: Vec<Vec<CheckRecord>> =
        pairs(cases)
            .par_iter()
            .map(|(g, p)| match build_tower(g, *p, guards) {
                Ok(t) => infrastructure_pair(g, *p, &t, guards),
                Err(e) => {
                    vec![Check::new(format!("tower/{g} p={p}"), "orbit categories", json!({ "group": g, "p": p }))
                        .error(&e)]
                }
            })
            .collect();
    out.extend(per.into_iter().flatten());
    out.extend(basis_vs_exhaustive(guards));
    out
}

fn infrastructure_pair(g: &str, p: u64, t: &OrbitTower, guards: &Guards) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let o = &t.full.cat;
    let d = &t.p_nontrivial.cat;
    let top = sipp_topology(t);
    let tag = format!("{g} p={p}");
    let [a, b] = random_coefficients(d, &tag, 0);
    let small = [
        ("constant Z/2", AbPresheaf::constant(d, &AbGroup::cyclic(2))),
        ("random reduction", a),
        ("random inclusion", b),
    ];

    // resolutions of the linearized minimal sieves
    let ck = Check::new(
        format!("infrastructure/resolution/{tag}"),
        ANCHOR_INFRA,
        json!({ "group": g, "p": p, "length": 3 }),
    );
    let mut bad = Vec::new();
    let mut skipped = None;
    for x in 0..o.object_count() {
        let zs = z_linearize(o, top.min_sieve(x));
        match resolve_by_representables(o, &zs, 3, guards.max_matrix_dim) {
            Ok(r) if !r.is_exact(o, &zs) => bad.push(x),
            Ok(_) => {}
            Err(e) if e.is_guard() => skipped = Some(e.to_string()),
            Err(e) => return vec![ck.error(&e)],
        }
    }
    out.push(match skipped {
        Some(why) if bad.is_empty() => {
            ck.finish(Outcome::Skipped, json!({ "inexact": bad }), Some(json!({ "guard": why })))
        }
        _ => ck.verdict(bad.is_empty(), json!({ "inexact": bad }), || json!({ "objects": bad })),
    });

    // normalized against unnormalized cochains, and the skeleton
    let sk = skeleton(d);
    for (name, m) in &small {
        let ck = Check::new(
            format!("infrastructure/bar/{tag}/{name}"),
            ANCHOR_INFRA,
            json!({ "group": g, "p": p, "coefficient": name }),
        );
        let m_sk = m.restrict(&sk.inclusion);
        let mut rows = Vec::new();
        let mut bad = Vec::new();
        let mut guard = None;
        for i in 0..=2 {
            let r = (|| -> orbit_site_core::Result<(AbGroup, AbGroup, AbGroup)> {
                Ok((
                    category_cohomology_full(d, m, i, true, guards)?,
                    category_cohomology_full(d, m, i, false, guards)?,
                    category_cohomology(&sk.cat, &m_sk, i, guards)?,
                ))
            })();
            match r {
                Ok((n, u, s)) => {
                    if !(n.is_isomorphic(&u) && n.is_isomorphic(&s)) {
                        bad.push(i);
                    }
                    rows.push(
                        json!({ "degree": i, "normalized": ifs(&n), "unnormalized": ifs(&u), "skeleton": ifs(&s) }),
                    );
                }
                Err(e) if e.is_guard() && i > 0 => {
                    guard = Some(json!({ "degree": i, "guard": e.to_string() }));
                    break;
                }
                Err(e) => return vec![ck.error(&e)],
            }
        }
        let outputs = json!({ "degrees": rows, "skipped": guard });
        out.push(ck.verdict(bad.is_empty(), outputs, || json!({ "degrees": bad })));
    }

    // matching families against Ext⁰ on every sipp sieve
    let ck = Check::new(format!("infrastructure/nat-ext0/{tag}"), ANCHOR_INFRA, json!({ "group": g, "p": p }));
    let [ra, rb] = random_coefficients(o, &tag, 1);
    let ms = [z_constant(o), g_m(t, 3), ra, rb];
    let mut bad = Vec::new();
    for x in 0..o.object_count() {
        let s = top.min_sieve(x);
        let zs = z_linearize(o, s);
        for (k, m) in ms.iter().enumerate() {
            let nat = matching_families(o, s, m).families.group;
            match ext_over_category(o, &zs, m, 0, guards.max_matrix_dim) {
                Ok(ext) if !nat.is_isomorphic(&ext[0]) => bad.push(json!({ "object": x, "coefficient": k })),
                Ok(_) => {}
                Err(e) => {
                    return {
                        out.push(ck.error(&e));
                        out
                    }
                }
            }
        }
    }
    out.push(ck.verdict(bad.is_empty(), json!({ "sieves": o.object_count(), "mismatches": bad.len() }), || json!(bad)));
    out
}

/// Tiny sites: every subcategory topology plus the extreme ones.
fn basis_vs_exhaustive(guards: &Guards) -> Vec<CheckRecord> {
    [("S3", 3u64), ("C4", 2), ("S3", 2)]
        .par_iter()
        .map(|&(g, p)| {
            let ck = Check::new(
                format!("infrastructure/sheaf-basis/{g} p={p}"),
                ANCHOR_INFRA,
                json!({ "group": g, "p": p }),
            );
            let t = match build_tower(g, p, guards) {
                Ok(t) => t,
                Err(e) => return ck.error(&e),
            };
            let c = &t.full.cat;
            let n = c.object_count();
            let mut tops = vec![FiniteTopology::minimal(c), FiniteTopology::maximal(c), sipp_topology(&t)];
            for mask in 1u64..(1 << n) {
                let d: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
                tops.push(subcategory_topology(c, &d));
            }
            let mut ms = vec![z_constant(c), AbPresheaf::constant(c, &units(5)), g_m(&t, 4)];
            for salt in 0..2 {
                ms.extend(random_coefficients(c, &format!("{g} p={p}"), salt));
            }
            let mut bad = Vec::new();
            for (i, top) in tops.iter().enumerate() {
                for (j, m) in ms.iter().enumerate() {
                    let basis = is_sheaf(c, top, m).is_sheaf;
                    match is_sheaf_exhaustive(c, top, m, guards.max_sieves) {
                        Some(full) if full.is_sheaf != basis => bad.push(json!({ "topology": i, "coefficient": j })),
                        Some(_) => {}
                        None => {
                            return ck.finish(
                                Outcome::Skipped,
                                Value::Null,
                                Some(json!({ "guard": "max_sieves", "topology": i })),
                            )
                        }
                    }
                }
            }
            let outputs = json!({ "topologies": tops.len(), "coefficients": ms.len(), "mismatches": bad.len() });
            ck.verdict(bad.is_empty(), outputs, || json!(bad))
        })
        .collect()
}
