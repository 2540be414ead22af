//! Two-engine comparisons on orbit-category sites.

use alloc::string::String;
use alloc::vec::Vec;

use crate::fincat::{full_subcategory, skeleton, FinFunctor};
use crate::kan::{derived_right_kan, right_kan, right_kan_counit};
use crate::linalg::{induced_map, AbGroup, Matrix};
use crate::orbit::OrbitTower;
use crate::orbit::{OrbitCategory, Variant};
use crate::presheaf::AbPresheaf;
use crate::site::sipp_topology;
use crate::{Error, Guards, Result};

use super::bar::{bar_complex, category_cohomology, pullback_cochains};
use super::resolution::ext_over_category;
use super::{ses_quotient, z_constant, z_linearize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: usize,
    pub left: AbGroup,
    pub right: AbGroup,
}

impl DegreeComparison {
    pub fn agree(&self) -> bool {
        self.left.is_isomorphic(&self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SippCechReport {
    /// `Extⁱ(ZS^min_{G/G}, RK_ι M)` against `Hⁱ(O_p°(G), M)`.
    pub degrees: Vec<DegreeComparison>,
    /// Degrees left out because a guard was hit.
    pub skipped: Vec<(usize, String)>,
}

impl SippCechReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(DegreeComparison::agree)
    }
}

fn skip_reason(e: &Error) -> Option<String> {
    e.is_guard().then(|| alloc::format!("{e}"))
}

/// Both sides of the Ext/category-cohomology identification in degrees
/// `0..=i_max`; a guard hit in some degree skips that degree and above.
pub fn sipp_cech_check(t: &OrbitTower, m: &AbPresheaf, i_max: usize, guards: &Guards) -> Result<SippCechReport> {
    let o = &t.full.cat;
    let rk = right_kan(&t.p_nontrivial.cat, o, &t.iota, m).presheaf;
    let zs = z_linearize(o, sipp_topology(t).min_sieve(t.top()));
    let mut degrees = Vec::new();
    let mut skipped = Vec::new();
    let mut top = i_max;
    let ext = loop {
        match ext_over_category(o, &zs, &rk, top, guards.max_matrix_dim) {
            Ok(v) => break v,
            Err(e) => match skip_reason(&e) {
                Some(r) if top > 0 => {
                    skipped.push((top, r));
                    top -= 1;
                }
                _ => return Err(e),
            },
        }
    };
    for (i, left) in ext.into_iter().enumerate() {
        match category_cohomology(&t.p_nontrivial.cat, m, i, guards) {
            Ok(right) => degrees.push(DegreeComparison { degree: i, left, right }),
            Err(e) => match skip_reason(&e) {
                Some(r) => {
                    skipped.push((i, r));
                    break;
                }
                None => return Err(e),
            },
        }
    }
    skipped.sort();
    Ok(SippCechReport { degrees, skipped })
}

/// `Ext¹(Q, M̂)` over `O(G)` against `Ext¹(Z̄, M̂|)` over the coprime-index
/// orbit category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtComparison {
    pub comparison: DegreeComparison,
    pub exact_sequence: bool,
}

impl ExtComparison {
    pub fn passed(&self) -> bool {
        self.exact_sequence && self.comparison.agree()
    }
}

pub fn ext_comparison_check(t: &OrbitTower, m_hat: &AbPresheaf, guards: &Guards) -> Result<ExtComparison> {
    let o = &t.full.cat;
    let ses = ses_quotient(o, sipp_topology(t).min_sieve(t.top()));
    let left = ext_over_category(o, &ses.quotient, m_hat, 1, guards.max_matrix_dim)?.swap_remove(1);
    let coprime = OrbitCategory::new(t.full.group.clone(), Some(t.p), Variant::PCoprimeIndex)?;
    let incl = coprime.inclusion_into(&t.full).expect("subcategory");
    let right =
        ext_over_category(&coprime.cat, &z_constant(&coprime.cat), &m_hat.restrict(&incl), 1, guards.max_matrix_dim)?
            .swap_remove(1);
    Ok(ExtComparison { comparison: DegreeComparison { degree: 1, left, right }, exact_sequence: ses.exact })
}

/// The restriction map `Hⁱ(O_p(G), RK M) → Hⁱ(O_p°(G), M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeReport {
    pub degree: usize,
    pub source: AbGroup,
    pub target: AbGroup,
    pub injective: bool,
    pub surjective: bool,
}

impl EdgeReport {
    pub fn is_iso(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Lifts `f` through a fully faithful functor that is injective on objects
/// and morphisms.
fn lift_through(embedding: &FinFunctor, f: &FinFunctor) -> FinFunctor {
    let pos = |v: &[usize], x: usize| v.iter().position(|&y| y == x).expect("lies in the image");
    FinFunctor {
        object_map: f.object_map.iter().map(|&x| pos(&embedding.object_map, x)).collect(),
        morphism_map: f.morphism_map.iter().map(|&u| pos(&embedding.morphism_map, u)).collect(),
    }
}

/// Computed on the skeleton `S` of `O_p(G)` and its full subcategory `S°`
/// on nontrivial subgroups, restricting chains along `S° → S` and applying
/// the counit `RK(M)∘ι → M`.
pub fn edge_map_check(t: &OrbitTower, m: &AbPresheaf, i: usize, guards: &Guards) -> Result<EdgeReport> {
    let (op, opo) = (&t.p_subgroups.cat, &t.p_nontrivial.cat);
    let rk = right_kan(opo, op, &t.iota_p, m);
    let counit = right_kan_counit(opo, op, &t.iota_p, m, &rk);
    let sk = skeleton(op);
    let nontrivial: Vec<usize> =
        (0..sk.cat.object_count()).filter(|&s| t.iota_p.object_map.contains(&sk.inclusion.obj(s))).collect();
    let (sub, sub_incl) = full_subcategory(&sk.cat, &nontrivial)?;
    // S° → O_p°
    let to_opo = lift_through(&t.iota_p, &sk.inclusion.after(&sub_incl));
    let n_s = rk.presheaf.restrict(&sk.inclusion);
    let m_s = m.restrict(&to_opo);
    let src = bar_complex(&sk.cat, &n_s, i + 1, true, guards)?;
    let tgt = bar_complex(&sub, &m_s, i + 1, true, guards)?;
    let comps: Vec<Matrix> = (0..sub.object_count()).map(|s| counit.components[to_opo.obj(s)].clone()).collect();
    let cm = pullback_cochains(&sk.cat, &sub_incl, &src, &tgt, &comps, i);
    let (hs, ht) = (src.cohomology(i), tgt.cohomology(i));
    let map = induced_map(&hs, &ht, &cm);
    Ok(EdgeReport {
        degree: i,
        source: hs.group.clone(),
        target: ht.group.clone(),
        injective: map.is_injective(),
        surjective: map.is_surjective(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LerayReport {
    /// `(R¹I_*)(M)` at each object of `O_p(G)`.
    pub r1_values: Vec<AbGroup>,
    /// `H¹(O_p(G), R¹I_*(M)|)`
    pub h1: AbGroup,
}

impl LerayReport {
    pub fn vanishes(&self) -> bool {
        self.h1.is_trivial()
    }
}

/// `H¹(O_p(G), (R¹I_*)(M))`. The comma categories over `O_p(G)` agree with
/// those over `O(G)`, so the derived extension is taken along `O_p° → O_p`.
pub fn leray_vanishing_check(t: &OrbitTower, m: &AbPresheaf, guards: &Guards) -> Result<LerayReport> {
    let (op, opo) = (&t.p_subgroups.cat, &t.p_nontrivial.cat);
    let n = derived_right_kan(opo, op, &t.iota_p, m, 1, guards)?;
    let h1 = category_cohomology(op, &n, 1, guards)?;
    Ok(LerayReport { r1_values: n.values, h1 })
}
