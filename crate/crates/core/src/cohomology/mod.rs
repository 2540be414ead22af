//! Category cohomology, Ext over category algebras, Čech cohomology of
//! sieves, and the comparisons between them.

mod bar;
mod checks;
mod resolution;

pub use bar::{bar_complex, category_cohomology, category_cohomology_full, pullback_cochains, BarComplex, Limits};
pub use checks::{
    edge_map_check, ext_comparison_check, leray_vanishing_check, sipp_cech_check, DegreeComparison, EdgeReport,
    ExtComparison, LerayReport, SippCechReport,
};
pub use resolution::{ext_over_category, hom_complex, resolve_by_representables, FreeTerm, Resolution};

use alloc::vec::Vec;

use crate::fincat::FinCat;
use crate::kan::right_kan;
use crate::linalg::{AbGroup, AbMap, Integer, Matrix, Presentation};
use crate::orbit::OrbitTower;
use crate::presheaf::{AbNat, AbPresheaf};
use crate::site::{is_sheaf, sipp_topology, FiniteTopology, Sieve};
use crate::{Error, Guards, Result};

pub use crate::presheaf::z_constant;

/// `ZS`: the free abelian group on `S(y)` at each `y`, basis in
/// ascending morphism order.
pub fn z_linearize(c: &FinCat, s: &Sieve) -> AbPresheaf {
    let comps: Vec<Vec<usize>> = (0..c.object_count()).map(|y| s.component(c, y)).collect();
    let values = comps.iter().map(|v| AbGroup::free(v.len())).collect();
    let maps = (0..c.morphism_count())
        .map(|v| {
            let (y2, y) = (c.dom(v), c.cod(v));
            let mut m = Matrix::zeros(comps[y2].len(), comps[y].len());
            for (col, &f) in comps[y].iter().enumerate() {
                let g = c.compose(f, v);
                let row = comps[y2].iter().position(|&h| h == g).expect("sieves are closed");
                m.set(row, col, Integer::from(1));
            }
            m
        })
        .collect();
    AbPresheaf { values, maps }
}

/// `0 → ZS → Z̄ → Q → 0` with both maps and an objectwise exactness flag.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub sub: AbPresheaf,
    pub whole: AbPresheaf,
    pub quotient: AbPresheaf,
    pub inclusion: AbNat,
    pub projection: AbNat,
    pub exact: bool,
}

pub fn ses_quotient(c: &FinCat, s: &Sieve) -> ShortExact {
    let sub = z_linearize(c, s);
    let whole = z_constant(c);
    let inclusion = AbNat {
        components: (0..c.object_count())
            .map(|y| {
                let k = sub.values[y].ngens();
                Matrix::from_rows(vec_of_ones(k), k)
            })
            .collect(),
    };
    let decs: Vec<_> =
        (0..c.object_count()).map(|y| Presentation::new(1, inclusion.components[y].columns()).decompose()).collect();
    let quotient = AbPresheaf {
        values: decs.iter().map(|d| d.group.clone()).collect(),
        maps: (0..c.morphism_count())
            .map(|v| {
                let (y2, y) = (c.dom(v), c.cod(v));
                let m = decs[y2].to_group.mul(&whole.maps[v]).mul(&decs[y].from_group);
                AbMap::identity(&decs[y2].group)
                    .after(&AbMap::new(decs[y].group.clone(), decs[y2].group.clone(), m))
                    .matrix
            })
            .collect(),
    };
    let projection = AbNat { components: decs.iter().map(|d| d.to_group.clone()).collect() };
    let exact = (0..c.object_count()).all(|y| {
        let i = inclusion.component(&sub, &whole, y);
        let p = projection.component(&whole, &quotient, y);
        let ker = p.kernel();
        let im = i.image();
        i.is_injective()
            && p.is_surjective()
            && p.after(&i).is_zero()
            && ker.representatives().iter().all(|v| im.contains(v))
    });
    ShortExact { sub, whole, quotient, inclusion, projection, exact }
}

fn vec_of_ones(k: usize) -> Vec<Vec<Integer>> {
    alloc::vec![alloc::vec![Integer::from(1); k]]
}

/// `Ȟⁱ(x, M) = Extⁱ(Z S^min_x, M)`.
pub fn cech_cohomology(
    c: &FinCat,
    x: usize,
    m: &AbPresheaf,
    t: &FiniteTopology,
    i: usize,
    guards: &Guards,
) -> Result<AbGroup> {
    let zs = z_linearize(c, t.min_sieve(x));
    Ok(ext_over_category(c, &zs, m, i, guards.max_matrix_dim)?.swap_remove(i))
}

/// `Hⁱ` of the sipp topos, through the equivalence with presheaves on `O_p(G)`.
pub fn topos_cohomology_sipp(t: &OrbitTower, f: &AbPresheaf, i: usize, guards: &Guards) -> Result<AbGroup> {
    let top = sipp_topology(t);
    let check = is_sheaf(&t.full.cat, &top, f);
    if !check.is_sheaf {
        return Err(Error::NotASheaf(alloc::format!("sheaf condition fails on {:?}", check.witness)));
    }
    category_cohomology(&t.p_subgroups.cat, &f.restrict(&t.incl_p), i, guards)
}

/// `Z/(q−1)` as a group.
pub fn units(q: u64) -> AbGroup {
    AbGroup::cyclic(q.saturating_sub(1))
}

/// `G_m = RK_ι` of the constant `Z/(q−1)` along `O_p°(G) → O(G)`.
pub fn g_m(t: &OrbitTower, q: u64) -> AbPresheaf {
    let k = AbPresheaf::constant(&t.p_nontrivial.cat, &units(q));
    right_kan(&t.p_nontrivial.cat, &t.full.cat, &t.iota, &k).presheaf
}
