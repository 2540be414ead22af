//! Sieves, finite Grothendieck topologies and sheaves on finite sites.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::fincat::{is_filtered, opposite, under_category, FinCat, FinFunctor};
use crate::linalg::{kernel_mod, AbGroup, AbMap, Integer, Matrix, Subquotient};
use crate::orbit::OrbitTower;
use crate::presheaf::{AbNat, AbPresheaf, SetPresheaf};
use crate::{Error, Result};

/// A set of morphisms into `apex` closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub apex: usize,
    members: BitSet,
}

impl Sieve {
    pub fn empty(c: &FinCat, x: usize) -> Self {
        Sieve { apex: x, members: BitSet::new(c.morphism_count()) }
    }

    pub fn maximal(c: &FinCat, x: usize) -> Self {
        Sieve { apex: x, members: BitSet::from_indices(c.morphism_count(), c.into(x).iter().copied()) }
    }

    /// Wraps a raw member set without checking closure.
    pub fn from_members(apex: usize, members: BitSet) -> Self {
        Sieve { apex, members }
    }

    pub fn contains(&self, f: usize) -> bool {
        self.members.contains(f)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn member_set(&self) -> &BitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members with domain `z`.
    pub fn component(&self, c: &FinCat, z: usize) -> Vec<usize> {
        self.members().filter(|&f| c.dom(f) == z).collect()
    }

    pub fn is_subsieve_of(&self, other: &Sieve) -> bool {
        self.apex == other.apex && self.members.is_subset(&other.members)
    }

    /// Members end at the apex and the set is closed under precomposition.
    pub fn is_sieve(&self, c: &FinCat) -> bool {
        self.members()
            .all(|f| c.cod(f) == self.apex && c.into(c.dom(f)).iter().all(|&v| self.contains(c.compose(f, v))))
    }
}

/// `{uᵢ ∘ v}`: the smallest sieve on `apex` containing the given morphisms.
pub fn generate_sieve(c: &FinCat, apex: usize, morphisms: &[usize]) -> Result<Sieve> {
    let mut s = Sieve::empty(c, apex);
    for &u in morphisms {
        if c.cod(u) != apex {
            return Err(Error::MixedCodomain);
        }
        if s.contains(u) {
            continue;
        }
        for &v in c.into(c.dom(u)) {
            s.members.insert(c.compose(u, v));
        }
    }
    Ok(s)
}

/// `u*(S) = {v | u ∘ v ∈ S}`
pub fn pullback_sieve(c: &FinCat, u: usize, s: &Sieve) -> Result<Sieve> {
    if c.cod(u) != s.apex {
        return Err(Error::ApexMismatch);
    }
    let y = c.dom(u);
    let members =
        BitSet::from_indices(c.morphism_count(), c.into(y).iter().copied().filter(|&v| s.contains(c.compose(u, v))));
    Ok(Sieve { apex: y, members })
}

/// Every sieve on `x`, or `None` when there are more than `limit`.
pub fn all_sieves(c: &FinCat, x: usize, limit: u64) -> Option<Vec<Sieve>> {
    let principal: Vec<Sieve> = c.into(x).iter().map(|&f| generate_sieve(c, x, &[f]).expect("same codomain")).collect();
    let mut seen: BTreeSet<BitSet> = BTreeSet::new();
    let empty = Sieve::empty(c, x);
    seen.insert(empty.members.clone());
    let mut stack = vec![empty];
    while let Some(s) = stack.pop() {
        for p in &principal {
            if p.members.is_subset(&s.members) {
                continue;
            }
            let mut m = s.members.clone();
            m.union_with(&p.members);
            if seen.insert(m.clone()) {
                if seen.len() as u64 > limit {
                    return None;
                }
                stack.push(Sieve { apex: x, members: m });
            }
        }
    }
    let mut out: Vec<Sieve> = seen.into_iter().map(|m| Sieve { apex: x, members: m }).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Some(out)
}

/// A topology on a finite category held by its minimal covering sieves; a
/// sieve covers iff it contains the minimal one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    pub min_sieves: Vec<Sieve>,
}

impl FiniteTopology {
    /// Only maximal sieves cover.
    pub fn minimal(c: &FinCat) -> Self {
        FiniteTopology { min_sieves: (0..c.object_count()).map(|x| Sieve::maximal(c, x)).collect() }
    }

    /// Every sieve covers.
    pub fn maximal(c: &FinCat) -> Self {
        FiniteTopology { min_sieves: (0..c.object_count()).map(|x| Sieve::empty(c, x)).collect() }
    }

    pub fn min_sieve(&self, x: usize) -> &Sieve {
        &self.min_sieves[x]
    }

    pub fn covers(&self, s: &Sieve) -> bool {
        self.min_sieves[s.apex].is_subsieve_of(s)
    }

    /// A morphism `u: y → x` with `u*(S_x) ⊉ S_y`, if any.
    pub fn pullback_witness(&self, c: &FinCat) -> Option<usize> {
        (0..c.morphism_count()).find(|&u| {
            let pb = pullback_sieve(c, u, &self.min_sieves[c.cod(u)]).expect("apex matches");
            !self.min_sieves[c.dom(u)].is_subsieve_of(&pb)
        })
    }

    /// The sieves `u*(S_x)` for all `u: y → x`, grouped by `y`, deduplicated.
    pub fn pullback_basis(&self, c: &FinCat) -> Vec<Vec<Sieve>> {
        let mut out: Vec<BTreeSet<Sieve>> = vec![BTreeSet::new(); c.object_count()];
        for u in 0..c.morphism_count() {
            let pb = pullback_sieve(c, u, &self.min_sieves[c.cod(u)]).expect("apex matches");
            out[c.dom(u)].insert(pb);
        }
        for x in 0..c.object_count() {
            out[x].insert(self.min_sieves[x].clone());
        }
        out.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// The topology induced along a functor `β: D → C`: the minimal sieve at
    /// `d` is `{u | β(u) ∈ S_{β(d)}}`.
    pub fn induced(&self, d: &FinCat, beta: &FinFunctor) -> FiniteTopology {
        FiniteTopology {
            min_sieves: (0..d.object_count())
                .map(|x| pulled_back_along(d, beta, x, &self.min_sieves[beta.obj(x)]))
                .collect(),
        }
    }
}

fn pulled_back_along(d: &FinCat, beta: &FinFunctor, x: usize, s: &Sieve) -> Sieve {
    Sieve {
        apex: x,
        members: BitSet::from_indices(
            d.morphism_count(),
            d.into(x).iter().copied().filter(|&u| s.contains(beta.mor(u))),
        ),
    }
}

/// The topology whose minimal sieve at `x` consists of the morphisms into
/// `x` factoring through an object of `d`.
pub fn subcategory_topology(c: &FinCat, d: &[usize]) -> FiniteTopology {
    let min_sieves = (0..c.object_count())
        .map(|x| {
            let mut m = BitSet::new(c.morphism_count());
            for &w in d {
                for h in c.hom(w, x) {
                    for &k in c.into(w) {
                        m.insert(c.compose(h, k));
                    }
                }
            }
            Sieve { apex: x, members: m }
        })
        .collect();
    FiniteTopology { min_sieves }
}

/// The least sieve on each `x` that contains all of `Hom(w, x)` for
/// `w ∈ d`, built directly from that surjectivity requirement.
pub fn subcategory_topology_literal(c: &FinCat, d: &[usize]) -> FiniteTopology {
    let min_sieves = (0..c.object_count())
        .map(|x| {
            let gens: Vec<usize> = d.iter().flat_map(|&w| c.hom(w, x)).collect();
            generate_sieve(c, x, &gens).expect("same codomain")
        })
        .collect();
    FiniteTopology { min_sieves }
}

/// The sipp topology on `O(G)`, as the subcategory topology of `O_p(G)`.
pub fn sipp_topology(t: &OrbitTower) -> FiniteTopology {
    subcategory_topology(&t.full.cat, &t.p_objects())
}

/// On `O(G)`: the sieve on `G/H` generated by the projections `G/P → G/H`
/// for all Sylow `p`-subgroups `P ≤ H`.
pub fn sylow_generated_sieve(t: &OrbitTower, x: usize) -> Sieve {
    let o = &t.full;
    let g = &*o.group;
    let h = o.subgroup(x);
    let gens: Vec<usize> = g
        .sylow_subgroups(h, t.p)
        .iter()
        .map(|p| {
            let y = o.object_of(p.canonical_id).expect("every subgroup is an object");
            o.morphism_of(y, x, 0).expect("inclusions induce morphisms")
        })
        .collect();
    generate_sieve(&o.cat, x, &gens).expect("same codomain")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomStatus {
    Pass,
    /// Too many sieves to enumerate; only pullback stability was checked.
    Partial {
        pullback_stable: bool,
    },
    Fail(AxiomWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomWitness {
    NotASieve { object: usize },
    Maximality { object: usize },
    Stability { morphism: usize },
    Transitivity { object: usize, covering: Sieve, sieve: Sieve },
}

/// Checks the three topology axioms for the up-closure of the minimal sieves.
pub fn topology_axioms_check(c: &FinCat, t: &FiniteTopology, limit: u64) -> AxiomStatus {
    for x in 0..c.object_count() {
        if t.min_sieves[x].apex != x || !t.min_sieves[x].is_sieve(c) {
            return AxiomStatus::Fail(AxiomWitness::NotASieve { object: x });
        }
        if !t.covers(&Sieve::maximal(c, x)) {
            return AxiomStatus::Fail(AxiomWitness::Maximality { object: x });
        }
    }
    let mut sieves = Vec::new();
    for x in 0..c.object_count() {
        match all_sieves(c, x, limit) {
            Some(s) => sieves.push(s),
            None => {
                return match t.pullback_witness(c) {
                    None => AxiomStatus::Partial { pullback_stable: true },
                    Some(u) => AxiomStatus::Fail(AxiomWitness::Stability { morphism: u }),
                }
            }
        }
    }
    for u in 0..c.morphism_count() {
        for s in sieves[c.cod(u)].iter().filter(|s| t.covers(s)) {
            if !t.covers(&pullback_sieve(c, u, s).expect("apex matches")) {
                return AxiomStatus::Fail(AxiomWitness::Stability { morphism: u });
            }
        }
    }
    for x in 0..c.object_count() {
        for s in sieves[x].iter().filter(|s| t.covers(s)) {
            for r in &sieves[x] {
                let locally = s.members().all(|u| t.covers(&pullback_sieve(c, u, r).expect("apex matches")));
                if locally && !t.covers(r) {
                    return AxiomStatus::Fail(AxiomWitness::Transitivity {
                        object: x,
                        covering: s.clone(),
                        sieve: r.clone(),
                    });
                }
            }
        }
    }
    AxiomStatus::Pass
}

/// Matching families of an abelian presheaf over a sieve.
#[derive(Clone, Debug)]
pub struct MatchingFamilies {
    pub members: Vec<usize>,
    /// `⊕_{f ∈ S} M(dom f)`
    pub ambient: AbGroup,
    pub offsets: Vec<usize>,
    pub families: Subquotient,
}

impl MatchingFamilies {
    pub fn slot(&self, f: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == f)
    }
}

/// `Nat(S, M)` as the subgroup of compatible tuples `(a_f)` with
/// `M(v)(a_f) = a_{f∘v}`.
pub fn matching_families(c: &FinCat, s: &Sieve, m: &AbPresheaf) -> MatchingFamilies {
    let members: Vec<usize> = s.members().collect();
    let mut offsets = Vec::with_capacity(members.len());
    let mut acc = 0;
    for &f in &members {
        offsets.push(acc);
        acc += m.values[c.dom(f)].ngens();
    }
    let ambient = AbGroup::direct_sum(members.iter().map(|&f| &m.values[c.dom(f)]));
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut blocks: Vec<(usize, usize, usize)> = Vec::new();
    let mut rows = 0;
    let mut target_moduli: Vec<Integer> = Vec::new();
    for (i, &f) in members.iter().enumerate() {
        for &v in c.into(c.dom(f)) {
            if c.is_identity(v) {
                continue;
            }
            let tgt = &m.values[c.dom(v)];
            blocks.push((rows, i, v));
            rows += tgt.ngens();
            target_moduli.extend(tgt.moduli().iter().cloned());
        }
    }
    let mut d = Matrix::zeros(rows, acc);
    let one = Integer::from(1);
    let minus = Integer::from(-1);
    for &(r0, i, v) in &blocks {
        let f = members[i];
        let j = pos[&c.compose(f, v)];
        d.add_block(r0, offsets[i], &m.maps[v], &one);
        let k = m.values[c.dom(v)].ngens();
        d.add_block(r0, offsets[j], &Matrix::identity(k), &minus);
    }
    let gens = kernel_mod(&d, &target_moduli);
    let families = Subquotient::new(&ambient, &gens, &[]);
    MatchingFamilies { members, ambient, offsets, families }
}

/// `M(x) → Nat(S, M)`, `a ↦ (M(f) a)_f`, into the ambient direct sum.
pub fn restriction_map(mf: &MatchingFamilies, m: &AbPresheaf, x: usize) -> AbMap {
    let mut mat = Matrix::zeros(mf.ambient.ngens(), m.values[x].ngens());
    for (i, &f) in mf.members.iter().enumerate() {
        mat.put_block(mf.offsets[i], 0, &m.maps[f]);
    }
    let mut out = AbMap::new(m.values[x].clone(), mf.ambient.clone(), mat);
    for j in 0..out.matrix.cols() {
        let col = mf.ambient.reduced(out.matrix.column(j));
        for (i, v) in col.into_iter().enumerate() {
            out.matrix.set(i, j, v);
        }
    }
    out
}

/// Whether `M(x) → Nat(S, M)` is an isomorphism.
pub fn sheaf_condition_holds(c: &FinCat, s: &Sieve, m: &AbPresheaf) -> bool {
    let mf = matching_families(c, s, m);
    let phi = restriction_map(&mf, m, s.apex);
    if !phi.is_injective() {
        return false;
    }
    let im = phi.image();
    mf.families.representatives().iter().all(|v| im.contains(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafCheck {
    pub is_sheaf: bool,
    pub witness: Option<Sieve>,
}

fn sheaf_over(sieves: &[Vec<Sieve>], mut ok: impl FnMut(&Sieve) -> bool) -> SheafCheck {
    for s in sieves.iter().flatten() {
        if !ok(s) {
            return SheafCheck { is_sheaf: false, witness: Some(s.clone()) };
        }
    }
    SheafCheck { is_sheaf: true, witness: None }
}

/// Sheaf condition over the pullback-stable basis of minimal sieves.
pub fn is_sheaf(c: &FinCat, t: &FiniteTopology, m: &AbPresheaf) -> SheafCheck {
    sheaf_over(&t.pullback_basis(c), |s| sheaf_condition_holds(c, s, m))
}

/// Sheaf condition over every covering sieve; `None` past the sieve limit.
pub fn is_sheaf_exhaustive(c: &FinCat, t: &FiniteTopology, m: &AbPresheaf, limit: u64) -> Option<SheafCheck> {
    let covering = covering_sieves(c, t, limit)?;
    Some(sheaf_over(&covering, |s| sheaf_condition_holds(c, s, m)))
}

fn covering_sieves(c: &FinCat, t: &FiniteTopology, limit: u64) -> Option<Vec<Vec<Sieve>>> {
    (0..c.object_count())
        .map(|x| all_sieves(c, x, limit).map(|v| v.into_iter().filter(|s| t.covers(s)).collect()))
        .collect()
}

/// Matching families of a set presheaf over a sieve, each as one element
/// index per member (in member order).
pub fn matching_families_set(c: &FinCat, s: &Sieve, f: &SetPresheaf, limit: u64) -> Result<Vec<Vec<usize>>> {
    let members: Vec<usize> = s.members().collect();
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(members.len());
    fn consistent(c: &FinCat, f: &SetPresheaf, members: &[usize], pos: &BTreeMap<usize, usize>, cur: &[usize]) -> bool {
        let i = cur.len() - 1;
        let mi = members[i];
        // constraints between the newest entry and earlier ones, both ways
        for &v in c.into(c.dom(mi)) {
            let j = pos[&c.compose(mi, v)];
            if j < cur.len() && f.maps[v][cur[i]] != cur[j] {
                return false;
            }
        }
        for (k, &mk) in members[..i].iter().enumerate() {
            for &v in c.into(c.dom(mk)) {
                if c.compose(mk, v) == mi && f.maps[v][cur[k]] != cur[i] {
                    return false;
                }
            }
        }
        true
    }
    fn rec(
        c: &FinCat,
        f: &SetPresheaf,
        members: &[usize],
        pos: &BTreeMap<usize, usize>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: u64,
    ) -> Result<()> {
        if cur.len() == members.len() {
            if out.len() as u64 >= limit {
                return Err(Error::EnumerationGuardExceeded { limit });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let m = members[cur.len()];
        for a in 0..f.values[c.dom(m)] {
            cur.push(a);
            if consistent(c, f, members, pos, cur) {
                rec(c, f, members, pos, cur, out, limit)?;
            }
            cur.pop();
        }
        Ok(())
    }
    rec(c, f, &members, &pos, &mut cur, &mut out, limit)?;
    Ok(out)
}

fn set_restriction(s: &Sieve, f: &SetPresheaf, a: usize) -> Vec<usize> {
    s.members().map(|m| f.maps[m][a]).collect()
}

/// Set-valued sheaf condition over the pullback basis.
pub fn is_sheaf_set(c: &FinCat, t: &FiniteTopology, f: &SetPresheaf, limit: u64) -> Result<SheafCheck> {
    for s in t.pullback_basis(c).iter().flatten() {
        let fam = matching_families_set(c, s, f, limit)?;
        let mut restricted: Vec<Vec<usize>> = (0..f.values[s.apex]).map(|a| set_restriction(s, f, a)).collect();
        restricted.sort();
        restricted.dedup();
        if restricted.len() != f.values[s.apex] || fam.len() != restricted.len() {
            return Ok(SheafCheck { is_sheaf: false, witness: Some(s.clone()) });
        }
    }
    Ok(SheafCheck { is_sheaf: true, witness: None })
}

/// `M†(x) = Nat(S_x, M)` with the unit `M → M†`.
pub fn half_sheafify(c: &FinCat, t: &FiniteTopology, m: &AbPresheaf) -> (AbPresheaf, AbNat) {
    let fams: Vec<MatchingFamilies> =
        (0..c.object_count()).map(|x| matching_families(c, &t.min_sieves[x], m)).collect();
    let values: Vec<AbGroup> = fams.iter().map(|mf| mf.families.group.clone()).collect();
    let maps = (0..c.morphism_count())
        .map(|u| {
            let (y, x) = (c.dom(u), c.cod(u));
            let (src, dst) = (&fams[x], &fams[y]);
            let images: Vec<Vec<Integer>> = src
                .families
                .representatives()
                .iter()
                .map(|fam| {
                    let mut v = Vec::with_capacity(dst.ambient.ngens());
                    for &g in &dst.members {
                        let slot = src.slot(c.compose(u, g)).expect("pullback stability");
                        let k = m.values[c.dom(g)].ngens();
                        v.extend_from_slice(&fam[src.offsets[slot]..src.offsets[slot] + k]);
                    }
                    v
                })
                .collect();
            dst.families.map_from(&values[x], &images).matrix
        })
        .collect();
    let unit = AbNat {
        components: (0..c.object_count())
            .map(|x| {
                let phi = restriction_map(&fams[x], m, x);
                let images = phi.matrix.columns();
                fams[x].families.map_from(&m.values[x], &images).matrix
            })
            .collect(),
    };
    (AbPresheaf { values, maps }, unit)
}

/// `M♯ = (M†)†` with the composite unit.
pub fn sheafify(c: &FinCat, t: &FiniteTopology, m: &AbPresheaf) -> (AbPresheaf, AbNat) {
    let (m1, u1) = half_sheafify(c, t, m);
    let (m2, u2) = half_sheafify(c, t, &m1);
    let components = (0..c.object_count())
        .map(|x| {
            let a = u1.component(m, &m1, x);
            let b = u2.component(&m1, &m2, x);
            b.after(&a).matrix
        })
        .collect();
    (m2, AbNat { components })
}

/// `F†` for a set presheaf, with the family list at each object.
pub fn half_sheafify_set(
    c: &FinCat,
    t: &FiniteTopology,
    f: &SetPresheaf,
    limit: u64,
) -> Result<(SetPresheaf, Vec<Vec<Vec<usize>>>)> {
    let fams: Vec<Vec<Vec<usize>>> =
        (0..c.object_count()).map(|x| matching_families_set(c, &t.min_sieves[x], f, limit)).collect::<Result<_>>()?;
    let members: Vec<Vec<usize>> = (0..c.object_count()).map(|x| t.min_sieves[x].members().collect()).collect();
    let maps = (0..c.morphism_count())
        .map(|u| {
            let (y, x) = (c.dom(u), c.cod(u));
            fams[x]
                .iter()
                .map(|fam| {
                    let img: Vec<usize> = members[y]
                        .iter()
                        .map(|&g| {
                            let k = members[x].iter().position(|&h| h == c.compose(u, g)).expect("pullback stability");
                            fam[k]
                        })
                        .collect();
                    fams[y].iter().position(|e| *e == img).expect("restricted families match")
                })
                .collect()
        })
        .collect();
    Ok((SetPresheaf { values: fams.iter().map(Vec::len).collect(), maps }, fams))
}

/// Every object has a covering sieve whose members all have domain in `d`.
pub fn dense_subsite_check(c: &FinCat, t: &FiniteTopology, d: &[usize]) -> bool {
    let inside = BitSet::from_indices(c.object_count(), d.iter().copied());
    (0..c.object_count()).all(|x| t.min_sieves[x].members().all(|f| inside.contains(c.dom(f))))
}

/// `{u | β(u) ∈ S_{β(d)}}` covers `d` for every `d`.
pub fn is_cocontinuous(d: &FinCat, beta: &FinFunctor, t_d: &FiniteTopology, t_c: &FiniteTopology) -> bool {
    (0..d.object_count()).all(|x| t_d.covers(&pulled_back_along(d, beta, x, &t_c.min_sieves[beta.obj(x)])))
}

/// `α(S_d)` generates a covering sieve on `α(d)`, and `(x/α)^op` is filtered
/// whenever it is nonempty.
pub fn is_continuous(d: &FinCat, c: &FinCat, alpha: &FinFunctor, t_d: &FiniteTopology, t_c: &FiniteTopology) -> bool {
    let generated = (0..d.object_count()).all(|x| {
        let imgs: Vec<usize> = t_d.min_sieves[x].members().map(|u| alpha.mor(u)).collect();
        let s = generate_sieve(c, alpha.obj(x), &imgs).expect("same codomain");
        t_c.covers(&s)
    });
    generated
        && (0..c.object_count()).all(|x| {
            let k = under_category(d, c, alpha, x);
            k.cat.object_count() == 0 || is_filtered(&opposite(&k.cat))
        })
}
