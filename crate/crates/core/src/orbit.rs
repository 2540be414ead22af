//! Orbit categories `O(G) ⊃ O_p(G) ⊃ O_p°(G)` and the coprime-index variant.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bitset::BitSet;
use crate::fincat::{FinCat, FinFunctor, Morphism};
use crate::group::{is_prime, p_part, PermGroup, Subgroup};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    All,
    PSubgroups,
    PNontrivial,
    PCoprimeIndex,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::All => "all",
            Variant::PSubgroups => "p-subgroups",
            Variant::PNontrivial => "p-nontrivial",
            Variant::PCoprimeIndex => "p-coprime-index",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Variant::All,
            "p-subgroups" => Variant::PSubgroups,
            "p-nontrivial" => Variant::PNontrivial,
            "p-coprime-index" => Variant::PCoprimeIndex,
            _ => return Err(Error::Invalid(format!("unknown variant {s}"))),
        })
    }
}

/// An orbit category with its hom-sets realised as cosets.
#[derive(Clone, Debug)]
pub struct OrbitCategory {
    pub cat: FinCat,
    pub group: Arc<PermGroup>,
    /// Subgroup id per object.
    pub object_subgroup: Vec<usize>,
    /// Canonical coset representative per morphism.
    pub morphism_coset: Vec<usize>,
    pub variant: Variant,
    pub p: Option<u64>,
}

/// Least element of the coset `x·K`.
fn coset_min(g: &PermGroup, x: usize, k: &Subgroup) -> usize {
    k.members().iter().map(|y| g.mul(x, y)).min().expect("subgroups are nonempty")
}

/// Canonical representatives `g` of the cosets `gK` with `g⁻¹Hg ⊆ K`.
pub fn hom_orbit(g: &PermGroup, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
    let n = g.order();
    let mut seen = BitSet::new(n);
    let mut out = Vec::new();
    for x in 0..n {
        if seen.contains(x) {
            continue;
        }
        for y in k.members().iter() {
            seen.insert(g.mul(x, y));
        }
        if h.members().iter().all(|m| k.contains(g.conj(m, x))) {
            out.push(x);
        }
    }
    out
}

fn member_of_variant(g: &PermGroup, h: &Subgroup, p: Option<u64>, v: Variant) -> bool {
    match (v, p) {
        (Variant::All, _) => true,
        (Variant::PSubgroups, Some(p)) => g.is_p_subgroup(h, p),
        (Variant::PNontrivial, Some(p)) => g.is_p_subgroup(h, p) && h.order() > 1,
        (Variant::PCoprimeIndex, Some(p)) => !((g.order() / h.order()) as u64).is_multiple_of(p),
        _ => false,
    }
}

impl OrbitCategory {
    pub fn new(group: Arc<PermGroup>, p: Option<u64>, variant: Variant) -> Result<Self> {
        if variant != Variant::All {
            match p {
                None => return Err(Error::Invalid("this variant needs a prime".into())),
                Some(p) if !is_prime(p) => return Err(Error::NotPrime(p)),
                _ => {}
            }
        }
        let objs: Vec<usize> = group
            .all_subgroups()
            .iter()
            .filter(|h| member_of_variant(&group, h, p, variant))
            .map(|h| h.canonical_id)
            .collect();
        if objs.is_empty() {
            return Err(Error::EmptyCategory);
        }
        Ok(Self::on_subgroups(group, &objs, p, variant))
    }

    /// The full subcategory of `O(G)` on the given subgroup ids (ascending).
    pub fn on_subgroups(group: Arc<PermGroup>, objs: &[usize], p: Option<u64>, variant: Variant) -> Self {
        let g = &*group;
        let mut morphisms = Vec::new();
        let mut cosets = Vec::new();
        let mut index = BTreeMap::new();
        for (a, &h) in objs.iter().enumerate() {
            for (b, &k) in objs.iter().enumerate() {
                for x in hom_orbit(g, g.subgroup(h), g.subgroup(k)) {
                    index.insert((a, b, x), morphisms.len());
                    morphisms.push(Morphism { dom: a, cod: b, label: format!("H{h}->H{k}@{x}") });
                    cosets.push(x);
                }
            }
        }
        let identities: Vec<usize> = (0..objs.len()).map(|a| index[&(a, a, 0)]).collect();
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.dom, m.cod)).collect();
        let cat =
            FinCat::from_fn(objs.iter().map(|&h| format!("G/H{h}")).collect(), morphisms, identities, |gm, fm| {
                let (a, _) = ends[fm];
                let (_, c) = ends[gm];
                let prod = g.mul(cosets[fm], cosets[gm]);
                let rep = coset_min(g, prod, g.subgroup(objs[c]));
                index[&(a, c, rep)]
            });
        OrbitCategory { cat, group: group.clone(), object_subgroup: objs.to_vec(), morphism_coset: cosets, variant, p }
    }

    pub fn subgroup(&self, object: usize) -> &Subgroup {
        self.group.subgroup(self.object_subgroup[object])
    }

    /// Object whose subgroup has the given id.
    pub fn object_of(&self, subgroup_id: usize) -> Option<usize> {
        self.object_subgroup.iter().position(|&h| h == subgroup_id)
    }

    /// Morphism `G/H → G/K` with representative `x`, for any `x` in the coset.
    pub fn morphism_of(&self, dom: usize, cod: usize, x: usize) -> Option<usize> {
        let rep = coset_min(&self.group, x, self.subgroup(cod));
        self.cat.out_of(dom).iter().copied().find(|&f| self.cat.cod(f) == cod && self.morphism_coset[f] == rep)
    }

    /// The inclusion functor into an orbit category of the same group
    /// containing all of this category's objects.
    pub fn inclusion_into(&self, big: &OrbitCategory) -> Option<FinFunctor> {
        let object_map = self.object_subgroup.iter().map(|&h| big.object_of(h)).collect::<Option<Vec<_>>>()?;
        let morphism_map = (0..self.cat.morphism_count())
            .map(|f| big.morphism_of(object_map[self.cat.dom(f)], object_map[self.cat.cod(f)], self.morphism_coset[f]))
            .collect::<Option<Vec<_>>>()?;
        Some(FinFunctor { object_map, morphism_map })
    }
}

/// Per-object comparison of `Aut(G/H)` with `N_G(H)/H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutRecord {
    pub object: usize,
    pub automorphisms: usize,
    pub expected: usize,
    pub isomorphic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutReport {
    pub records: Vec<AutRecord>,
}

impl AutReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.isomorphic && r.automorphisms == r.expected)
    }

    pub fn first_mismatch(&self) -> Option<&AutRecord> {
        self.records.iter().find(|r| !r.isomorphic || r.automorphisms != r.expected)
    }
}

/// Checks `|Aut(G/H)| = [N_G(H) : H]` and compares multiplication tables.
///
/// A morphism with representative `g` is sent to the coset `Hg` in `N_G(H)/H`.
/// Since `(g′ ∘ g)` has representative `gg′`, this is an anti-isomorphism,
/// which is what gets checked.
pub fn aut_check(c: &OrbitCategory) -> AutReport {
    let g = &*c.group;
    let mut records = Vec::new();
    for x in 0..c.cat.object_count() {
        let h = c.subgroup(x);
        let n = g.normalizer(h);
        let autos: Vec<usize> = c.cat.hom(x, x).into_iter().filter(|&f| c.cat.is_iso(f)).collect();
        let expected = n.order() / h.order();
        let class = |e: usize| coset_min(g, e, h);
        let images: Vec<usize> = autos.iter().map(|&f| class(c.morphism_coset[f])).collect();
        let mut distinct = images.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let mut iso = distinct.len() == autos.len() && autos.iter().all(|&f| n.contains(c.morphism_coset[f]));
        if iso {
            for &f1 in &autos {
                for &f2 in &autos {
                    let comp = c.cat.compose(f2, f1);
                    let want = class(g.mul(c.morphism_coset[f1], c.morphism_coset[f2]));
                    let pos = autos.iter().position(|&a| a == comp);
                    if pos.map(|k| images[k]) != Some(want) {
                        iso = false;
                    }
                }
            }
        }
        records.push(AutRecord { object: x, automorphisms: autos.len(), expected, isomorphic: iso });
    }
    AutReport { records }
}

/// `O(G)`, `O_p(G)` and `O_p°(G)` with their inclusions.
#[derive(Clone, Debug)]
pub struct OrbitTower {
    pub p: u64,
    pub full: OrbitCategory,
    pub p_subgroups: OrbitCategory,
    pub p_nontrivial: OrbitCategory,
    /// `O_p°(G) → O(G)`
    pub iota: FinFunctor,
    /// `O_p°(G) → O_p(G)`
    pub iota_p: FinFunctor,
    /// `O_p(G) → O(G)`
    pub incl_p: FinFunctor,
}

impl OrbitTower {
    pub fn new(group: Arc<PermGroup>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p_part(group.order(), p) == 1 {
            return Err(Error::EmptyCategory);
        }
        let full = OrbitCategory::new(group.clone(), Some(p), Variant::All)?;
        let p_subgroups = OrbitCategory::new(group.clone(), Some(p), Variant::PSubgroups)?;
        let p_nontrivial = OrbitCategory::new(group, Some(p), Variant::PNontrivial)?;
        let iota = p_nontrivial.inclusion_into(&full).expect("subcategory");
        let iota_p = p_nontrivial.inclusion_into(&p_subgroups).expect("subcategory");
        let incl_p = p_subgroups.inclusion_into(&full).expect("subcategory");
        Ok(OrbitTower { p, full, p_subgroups, p_nontrivial, iota, iota_p, incl_p })
    }

    /// Objects of `O(G)` lying in `O_p(G)`.
    pub fn p_objects(&self) -> Vec<usize> {
        self.incl_p.object_map.clone()
    }

    /// The object `G/G` of `O(G)`.
    pub fn top(&self) -> usize {
        self.full.cat.object_count() - 1
    }
}
