//! Restriction and Kan extensions of presheaves along functors.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{bar_complex, pullback_cochains, Limits};
use crate::fincat::{comma_category, skeleton, under_category, CommaCategory, FinCat, FinFunctor};
use crate::linalg::{induced_map, kernel_mod, AbGroup, AbMap, Integer, Matrix, Subquotient};
use crate::presheaf::{AbNat, AbPresheaf, SetPresheaf};
use crate::Result;

pub fn restrict(m: &AbPresheaf, alpha: &FinFunctor) -> AbPresheaf {
    m.restrict(alpha)
}

pub fn restrict_set(m: &SetPresheaf, alpha: &FinFunctor) -> SetPresheaf {
    m.restrict(alpha)
}

/// `lim_K M` for a presheaf on `K`: compatible tuples in `⊕_k M(k)`.
#[derive(Clone, Debug)]
pub struct Limit {
    pub ambient: AbGroup,
    pub offsets: Vec<usize>,
    pub families: Subquotient,
}

impl Limit {
    /// `lim → M(k)`
    pub fn projection(&self, m: &AbPresheaf, k: usize) -> Matrix {
        let reps = self.families.representatives();
        let rows = m.values[k].ngens();
        let cols: Vec<Vec<Integer>> =
            reps.iter().map(|v| v[self.offsets[k]..self.offsets[k] + rows].to_vec()).collect();
        from_columns(rows, &cols)
    }
}

fn from_columns(rows: usize, cols: &[Vec<Integer>]) -> Matrix {
    if cols.is_empty() {
        Matrix::zeros(rows, 0)
    } else {
        Matrix::from_columns(rows, cols)
    }
}

pub fn presheaf_limit(k: &FinCat, m: &AbPresheaf) -> Limit {
    let mut offsets = Vec::with_capacity(k.object_count());
    let mut acc = 0;
    for x in 0..k.object_count() {
        offsets.push(acc);
        acc += m.values[x].ngens();
    }
    let ambient = AbGroup::direct_sum(m.values.iter());
    let live: Vec<usize> =
        (0..k.morphism_count()).filter(|&u| !k.is_identity(u) && m.values[k.dom(u)].ngens() > 0).collect();
    let rows: usize = live.iter().map(|&u| m.values[k.dom(u)].ngens()).sum();
    let mut d = Matrix::zeros(rows, acc);
    let mut moduli = Vec::with_capacity(rows);
    let mut r0 = 0;
    let (one, minus) = (Integer::from(1), Integer::from(-1));
    for &u in &live {
        let (a, b) = (k.dom(u), k.cod(u));
        d.add_block(r0, offsets[b], &m.maps[u], &one);
        d.add_block(r0, offsets[a], &Matrix::identity(m.values[a].ngens()), &minus);
        r0 += m.values[a].ngens();
        moduli.extend(m.values[a].moduli().iter().cloned());
    }
    let gens = kernel_mod(&d, &moduli);
    Limit { families: Subquotient::new(&ambient, &gens, &[]), ambient, offsets }
}

/// `RK_ι M` with the limit data at each object.
#[derive(Clone, Debug)]
pub struct RightKan {
    pub presheaf: AbPresheaf,
    pub commas: Vec<CommaCategory>,
    pub limits: Vec<Limit>,
}

impl RightKan {
    fn slot(&self, x: usize, d: usize, t: usize) -> usize {
        self.commas[x].pairs.iter().position(|&p| p == (d, t)).expect("comma object exists")
    }

    /// `RK(x) → M(d)` for the comma object `(d, t)`.
    pub fn projection(&self, m: &AbPresheaf, x: usize, slot: usize) -> Matrix {
        let lim = &self.limits[x];
        let d = self.commas[x].pairs[slot].0;
        let rows = m.values[d].ngens();
        let cols: Vec<Vec<Integer>> = lim
            .families
            .representatives()
            .iter()
            .map(|v| v[lim.offsets[slot]..lim.offsets[slot] + rows].to_vec())
            .collect();
        from_columns(rows, &cols)
    }
}

/// `RK_ι(M)(x) = lim_{ι/x} M∘proj`.
pub fn right_kan(d: &FinCat, c: &FinCat, iota: &FinFunctor, m: &AbPresheaf) -> RightKan {
    let commas: Vec<CommaCategory> = (0..c.object_count()).map(|x| comma_category(d, c, iota, x)).collect();
    let limits: Vec<Limit> = commas.iter().map(|k| presheaf_limit(&k.cat, &m.restrict(&k.projection))).collect();
    let values: Vec<AbGroup> = limits.iter().map(|l| l.families.group.clone()).collect();
    let mut rk = RightKan { presheaf: AbPresheaf { values: values.clone(), maps: Vec::new() }, commas, limits };
    let maps = (0..c.morphism_count())
        .map(|v| {
            let (y, x) = (c.dom(v), c.cod(v));
            let (src, dst) = (&rk.limits[x], &rk.limits[y]);
            let images: Vec<Vec<Integer>> = src
                .families
                .representatives()
                .iter()
                .map(|fam| {
                    let mut out = Vec::with_capacity(dst.ambient.ngens());
                    for &(dd, t) in &rk.commas[y].pairs {
                        let s = rk.slot(x, dd, c.compose(v, t));
                        let k = m.values[dd].ngens();
                        out.extend_from_slice(&fam[src.offsets[s]..src.offsets[s] + k]);
                    }
                    out
                })
                .collect();
            dst.families.map_from(&values[x], &images).matrix
        })
        .collect();
    rk.presheaf.maps = maps;
    rk
}

/// Unit `N → RK_ι(N∘ι)`: `n ↦ (N(t) n)_{(d,t)}`.
pub fn right_kan_unit(c: &FinCat, n: &AbPresheaf, rk: &RightKan) -> AbNat {
    let components = (0..c.object_count())
        .map(|x| {
            let lim = &rk.limits[x];
            let images: Vec<Vec<Integer>> = (0..n.values[x].ngens())
                .map(|j| {
                    let mut out = Vec::with_capacity(lim.ambient.ngens());
                    for &(_, t) in &rk.commas[x].pairs {
                        out.extend(n.maps[t].column(j));
                    }
                    out
                })
                .collect();
            lim.families.map_from(&n.values[x], &images).matrix
        })
        .collect();
    AbNat { components }
}

/// Counit `RK_ι(M)∘ι → M`: projection to the comma object `(d, id)`.
pub fn right_kan_counit(d: &FinCat, c: &FinCat, iota: &FinFunctor, m: &AbPresheaf, rk: &RightKan) -> AbNat {
    AbNat {
        components: (0..d.object_count())
            .map(|dd| {
                let x = iota.obj(dd);
                let s = rk.slot(x, dd, c.identity(x));
                rk.projection(m, x, s)
            })
            .collect(),
    }
}

/// `RK_ι(φ)` for `φ: M → M′`.
pub fn right_kan_map(c: &FinCat, m: &AbPresheaf, phi: &AbNat, rk: &RightKan, rk2: &RightKan) -> AbNat {
    let components = (0..c.object_count())
        .map(|x| {
            let (l1, l2) = (&rk.limits[x], &rk2.limits[x]);
            let images: Vec<Vec<Integer>> = l1
                .families
                .representatives()
                .iter()
                .map(|fam| {
                    let mut out = Vec::with_capacity(l2.ambient.ngens());
                    for (s, &(dd, _)) in rk.commas[x].pairs.iter().enumerate() {
                        let k = m.values[dd].ngens();
                        out.extend(phi.components[dd].mul_vec(&fam[l1.offsets[s]..l1.offsets[s] + k]));
                    }
                    out
                })
                .collect();
            l2.families.map_from(&rk.presheaf.values[x], &images).matrix
        })
        .collect();
    AbNat { components }
}

/// Both triangle identities of `Res ⊣ RK` at the given presheaves.
pub fn right_kan_triangles(d: &FinCat, c: &FinCat, iota: &FinFunctor, m: &AbPresheaf, n: &AbPresheaf) -> bool {
    // ε_{Res N} ∘ Res(η_N) = id
    let rn = right_kan(d, c, iota, &n.restrict(iota));
    let eta = right_kan_unit(c, n, &rn);
    let res_n = n.restrict(iota);
    let eps = right_kan_counit(d, c, iota, &res_n, &rn);
    let res_rn = rn.presheaf.restrict(iota);
    let first = (0..d.object_count()).all(|dd| {
        let x = iota.obj(dd);
        let e = AbMap::new(n.values[x].clone(), rn.presheaf.values[x].clone(), eta.components[x].clone());
        let p = eps.component(&res_rn, &res_n, dd);
        p.after(&e).agrees_with(&AbMap::identity(&n.values[x]))
    });
    // RK(ε_M) ∘ η_{RK M} = id
    let rm = right_kan(d, c, iota, m);
    let eta2 = right_kan_unit(c, &rm.presheaf, &right_kan(d, c, iota, &rm.presheaf.restrict(iota)));
    let rrm = right_kan(d, c, iota, &rm.presheaf.restrict(iota));
    let eps_m = right_kan_counit(d, c, iota, m, &rm);
    let back = right_kan_map(c, &rm.presheaf.restrict(iota), &eps_m, &rrm, &rm);
    let second = (0..c.object_count()).all(|x| {
        let a = eta2.component(&rm.presheaf, &rrm.presheaf, x);
        let b = back.component(&rrm.presheaf, &rm.presheaf, x);
        b.after(&a).agrees_with(&AbMap::identity(&rm.presheaf.values[x]))
    });
    first && second
}

/// `LK_α(M)(x) = colim` of `M` over `x/α`, with representatives
/// `(comma object, element)` per class.
#[derive(Clone, Debug)]
pub struct LeftKanSet {
    pub presheaf: SetPresheaf,
    pub commas: Vec<CommaCategory>,
    /// Per object, the class of each `(slot, element)`.
    pub class_of: Vec<BTreeMap<(usize, usize), usize>>,
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let n = p[y];
        p[y] = r;
        y = n;
    }
    r
}

pub fn left_kan_set(d: &FinCat, c: &FinCat, alpha: &FinFunctor, m: &SetPresheaf) -> LeftKanSet {
    let commas: Vec<CommaCategory> = (0..c.object_count()).map(|x| under_category(d, c, alpha, x)).collect();
    let mut class_of = Vec::with_capacity(c.object_count());
    let mut counts = Vec::with_capacity(c.object_count());
    for k in &commas {
        let mut ids = BTreeMap::new();
        let mut elems = Vec::new();
        for (s, &(dd, _)) in k.pairs.iter().enumerate() {
            for a in 0..m.values[dd] {
                ids.insert((s, a), elems.len());
                elems.push((s, a));
            }
        }
        let mut parent: Vec<usize> = (0..elems.len()).collect();
        for u in 0..k.cat.morphism_count() {
            let (s1, s2) = (k.cat.dom(u), k.cat.cod(u));
            let du = k.projection.mor(u);
            for a in 0..m.values[k.pairs[s2].0] {
                let i = find(&mut parent, ids[&(s2, a)]);
                let j = find(&mut parent, ids[&(s1, m.maps[du][a])]);
                if i != j {
                    parent[i.max(j)] = i.min(j);
                }
            }
        }
        let mut label = BTreeMap::new();
        let mut cls = BTreeMap::new();
        for (e, &key) in elems.iter().enumerate() {
            let r = find(&mut parent, e);
            let next = label.len();
            let l = *label.entry(r).or_insert(next);
            cls.insert(key, l);
        }
        counts.push(label.len());
        class_of.push(cls);
    }
    let maps = (0..c.morphism_count())
        .map(|v| {
            let (y, x) = (c.dom(v), c.cod(v));
            let mut table = vec![usize::MAX; counts[x]];
            for (&(s, a), &l) in &class_of[x] {
                if table[l] != usize::MAX {
                    continue;
                }
                let (dd, t) = commas[x].pairs[s];
                let t2 = c.compose(t, v);
                let s2 = commas[y].pairs.iter().position(|&p| p == (dd, t2)).expect("comma object");
                table[l] = class_of[y][&(s2, a)];
            }
            table
        })
        .collect();
    LeftKanSet { presheaf: SetPresheaf { values: counts, maps }, commas, class_of }
}

/// Both triangle identities of `LK ⊣ Res` at the given presheaves, checked
/// on every representative of every class.
pub fn left_kan_triangles(d: &FinCat, c: &FinCat, alpha: &FinFunctor, m: &SetPresheaf, n: &SetPresheaf) -> bool {
    // η_d(a) = [(d, id), a]
    let unit = |lk: &LeftKanSet, dd: usize, a: usize| {
        let x = alpha.obj(dd);
        let s = lk.commas[x].pairs.iter().position(|&p| p == (dd, c.identity(x))).expect("comma object");
        lk.class_of[x][&(s, a)]
    };
    // ε_{LK M} ∘ LK(η_M): [(d,t), a] ↦ LK(M)(t)(η_d a)
    let lk = left_kan_set(d, c, alpha, m);
    let first = (0..c.object_count()).all(|x| {
        lk.class_of[x].iter().all(|(&(s, a), &l)| {
            let (dd, t) = lk.commas[x].pairs[s];
            lk.presheaf.maps[t][unit(&lk, dd, a)] == l
        })
    });
    // Res(ε_N) ∘ η_{Res N}: b ↦ N(t)(a) for any [(d′,t), a] = η_d(b)
    let rn = n.restrict(alpha);
    let lkn = left_kan_set(d, c, alpha, &rn);
    let second = (0..d.object_count()).all(|dd| {
        let x = alpha.obj(dd);
        (0..rn.values[dd]).all(|b| {
            let l = unit(&lkn, dd, b);
            lkn.class_of[x].iter().filter(|(_, &v)| v == l).all(|(&(s, a), _)| n.maps[lkn.commas[x].pairs[s].1][a] == b)
        })
    });
    first && second
}

/// `(RʲI_*)(M)(x) = Hʲ(ι/x, M∘proj)` from normalized bar complexes on
/// skeletons of the comma categories, with structure maps induced along
/// `ι/x′ → ι/x`.
pub fn derived_right_kan(
    d: &FinCat,
    c: &FinCat,
    iota: &FinFunctor,
    m: &AbPresheaf,
    j: usize,
    limit: impl Into<Limits>,
) -> Result<AbPresheaf> {
    derived_right_kan_with(d, c, iota, m, j, true, true, limit)
}

/// A comma category replaced by an equivalent working category.
struct Reduced {
    comma: CommaCategory,
    work: FinCat,
    /// work → comma
    inclusion: FinFunctor,
    /// comma → work
    retraction: FinFunctor,
    /// comma object `k` → its representative
    transport: Vec<usize>,
}

fn reduce(comma: CommaCategory, use_skeleton: bool) -> Reduced {
    if use_skeleton && comma.cat.object_count() > 0 {
        let sk = skeleton(&comma.cat);
        Reduced { work: sk.cat, inclusion: sk.inclusion, retraction: sk.retraction, transport: sk.transport, comma }
    } else {
        let id = FinFunctor::identity(&comma.cat);
        Reduced {
            work: comma.cat.clone(),
            inclusion: id.clone(),
            retraction: id,
            transport: comma.cat.identities().to_vec(),
            comma,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn derived_right_kan_with(
    d: &FinCat,
    c: &FinCat,
    iota: &FinFunctor,
    m: &AbPresheaf,
    j: usize,
    normalized: bool,
    use_skeleton: bool,
    limit: impl Into<Limits>,
) -> Result<AbPresheaf> {
    let limit = limit.into();
    let red: Vec<Reduced> =
        (0..c.object_count()).map(|x| reduce(comma_category(d, c, iota, x), use_skeleton)).collect();
    let bars = red
        .iter()
        .map(|r| {
            let coeff = m.restrict(&r.comma.projection.after(&r.inclusion));
            bar_complex(&r.work, &coeff, j + 1, normalized, limit)
        })
        .collect::<Result<Vec<_>>>()?;
    let cohs: Vec<_> = bars.iter().map(|b| b.cohomology(j)).collect();
    let values: Vec<AbGroup> = cohs.iter().map(|h| h.group.clone()).collect();
    let maps = (0..c.morphism_count())
        .map(|v| {
            let (y, x) = (c.dom(v), c.cod(v));
            let (ry, rx) = (&red[y], &red[x]);
            // ι/y → ι/x, (d, t) ↦ (d, v∘t)
            let object_map: Vec<usize> = ry
                .comma
                .pairs
                .iter()
                .map(|&(dd, t)| rx.comma.pairs.iter().position(|&p| p == (dd, c.compose(v, t))).expect("comma object"))
                .collect();
            let (ky, kx) = (&ry.comma.cat, &rx.comma.cat);
            let morphism_map: Vec<usize> = (0..ky.morphism_count())
                .map(|u| {
                    let (a, b) = (object_map[ky.dom(u)], object_map[ky.cod(u)]);
                    let base = ry.comma.projection.mor(u);
                    kx.hom(a, b).into_iter().find(|&w| rx.comma.projection.mor(w) == base).expect("comma morphism")
                })
                .collect();
            let push = FinFunctor { object_map, morphism_map };
            let g = rx.retraction.after(&push.after(&ry.inclusion));
            let comps: Vec<Matrix> = (0..ry.work.object_count())
                .map(|s| {
                    let k = push.obj(ry.inclusion.obj(s));
                    m.maps[rx.comma.projection.mor(rx.transport[k])].clone()
                })
                .collect();
            let cm = pullback_cochains(&rx.work, &g, &bars[x], &bars[y], &comps, j);
            induced_map(&cohs[x], &cohs[y], &cm).matrix
        })
        .collect();
    Ok(AbPresheaf { values, maps })
}
