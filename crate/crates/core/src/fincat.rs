//! Finite categories given by explicit composition tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub dom: usize,
    pub cod: usize,
    pub label: String,
}

const NONE: u32 = u32::MAX;

/// A finite category with dense object and morphism ids.
///
/// Composition is stored per morphism `g` as a row indexed by the position of
/// `f` among the morphisms into `dom(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    into: Vec<Vec<usize>>,
    out_of: Vec<Vec<usize>>,
    into_pos: Vec<usize>,
    comp: Vec<Vec<u32>>,
}

/// Raw table data, as read from a file or assembled by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryParts {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    /// `(g, f, g∘f)`
    pub compose: Vec<(usize, usize, usize)>,
}

/// First problem found by [`FinCat::from_parts`] or [`validate_category`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadIdentity { object: usize },
    OutOfRange { what: &'static str, index: usize },
    NotComposable { g: usize, f: usize },
    MissingComposite { g: usize, f: usize },
    DuplicateComposite { g: usize, f: usize },
    WrongEnds { g: usize, f: usize },
    Unit { morphism: usize },
    Associativity { h: usize, g: usize, f: usize },
}

impl FinCat {
    /// Assembles a category without checking the axioms.
    ///
    /// # Panics
    /// If some composable pair has no composite.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> FinCat {
        let mut c = FinCat::skeleton_of(objects, morphisms, identities);
        for g in 0..c.morphisms.len() {
            let row: Vec<u32> = c.into[c.morphisms[g].dom].iter().map(|&f| compose(g, f) as u32).collect();
            c.comp[g] = row;
        }
        c
    }

    fn skeleton_of(objects: Vec<String>, morphisms: Vec<Morphism>, identities: Vec<usize>) -> FinCat {
        let n = objects.len();
        let mut into = vec![Vec::new(); n];
        let mut out_of = vec![Vec::new(); n];
        let mut into_pos = vec![0; morphisms.len()];
        for (i, m) in morphisms.iter().enumerate() {
            into_pos[i] = into[m.cod].len();
            into[m.cod].push(i);
            out_of[m.dom].push(i);
        }
        let comp = vec![Vec::new(); morphisms.len()];
        FinCat { objects, morphisms, identities, into, out_of, into_pos, comp }
    }

    /// Builds and fully validates a category from raw parts.
    pub fn from_parts(parts: &CategoryParts) -> core::result::Result<FinCat, Violation> {
        let n = parts.objects.len();
        let m = parts.morphisms.len();
        for (i, mo) in parts.morphisms.iter().enumerate() {
            if mo.dom >= n || mo.cod >= n {
                return Err(Violation::OutOfRange { what: "object", index: i });
            }
        }
        if parts.identities.len() != n {
            return Err(Violation::OutOfRange { what: "identities", index: parts.identities.len() });
        }
        for (x, &i) in parts.identities.iter().enumerate() {
            if i >= m || parts.morphisms[i].dom != x || parts.morphisms[i].cod != x {
                return Err(Violation::BadIdentity { object: x });
            }
        }
        let mut c = FinCat::skeleton_of(parts.objects.clone(), parts.morphisms.clone(), parts.identities.clone());
        for g in 0..m {
            c.comp[g] = vec![NONE; c.into[c.morphisms[g].dom].len()];
        }
        for &(g, f, gf) in &parts.compose {
            if g >= m || f >= m || gf >= m {
                return Err(Violation::OutOfRange { what: "morphism", index: g.max(f).max(gf) });
            }
            if c.morphisms[f].cod != c.morphisms[g].dom {
                return Err(Violation::NotComposable { g, f });
            }
            let slot = &mut c.comp[g][c.into_pos[f]];
            if *slot != NONE {
                return Err(Violation::DuplicateComposite { g, f });
            }
            *slot = gf as u32;
        }
        for g in 0..m {
            for (k, &v) in c.comp[g].iter().enumerate() {
                if v == NONE {
                    return Err(Violation::MissingComposite { g, f: c.into[c.morphisms[g].dom][k] });
                }
            }
        }
        match validate_category(&c) {
            None => Ok(c),
            Some(v) => Err(v),
        }
    }

    pub fn to_parts(&self) -> CategoryParts {
        let mut compose = Vec::new();
        for g in 0..self.morphisms.len() {
            for &f in &self.into[self.morphisms[g].dom] {
                compose.push((g, f, self.compose(g, f)));
            }
        }
        CategoryParts {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            compose,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_label(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.dom(f)] == f
    }

    /// `g ∘ f`.
    ///
    /// # Panics
    /// If `cod(f) ≠ dom(g)`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        assert_eq!(self.cod(f), self.dom(g), "composing non-composable morphisms");
        self.comp[g][self.into_pos[f]] as usize
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        (self.cod(f) == self.dom(g)).then(|| self.compose(g, f))
    }

    /// Morphisms with codomain `x`, ascending.
    pub fn into(&self, x: usize) -> &[usize] {
        &self.into[x]
    }

    /// Morphisms with domain `x`, ascending.
    pub fn out_of(&self, x: usize) -> &[usize] {
        &self.out_of[x]
    }

    /// `Hom(x, y)`, ascending.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.out_of[x].iter().copied().filter(|&f| self.cod(f) == y).collect()
    }

    /// An inverse of `f`, if `f` is an isomorphism.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (x, y) = (self.dom(f), self.cod(f));
        self.hom(y, x)
            .into_iter()
            .find(|&g| self.compose(g, f) == self.identity(x) && self.compose(f, g) == self.identity(y))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    /// Least object with exactly one morphism from every object.
    pub fn terminal_object(&self) -> Option<usize> {
        (0..self.object_count()).find(|&t| (0..self.object_count()).all(|x| self.hom(x, t).len() == 1))
    }

    /// The one-object category of a group given by its multiplication table.
    pub fn from_group_table(order: usize, mul: impl Fn(usize, usize) -> usize) -> FinCat {
        let morphisms = (0..order).map(|g| Morphism { dom: 0, cod: 0, label: format!("g{g}") }).collect();
        FinCat::from_fn(vec![String::from("*")], morphisms, vec![0], |g, f| mul(f, g))
    }

    /// The category of a finite poset, `le(a, b)` meaning `a ≤ b`.
    pub fn from_poset(n: usize, le: impl Fn(usize, usize) -> bool) -> FinCat {
        let mut morphisms = Vec::new();
        let mut id = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    id.insert((a, b), morphisms.len());
                    morphisms.push(Morphism { dom: a, cod: b, label: format!("{a}<={b}") });
                }
            }
        }
        let identities = (0..n).map(|a| id[&(a, a)]).collect();
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.dom, m.cod)).collect();
        FinCat::from_fn((0..n).map(|a| format!("{a}")).collect(), morphisms, identities, |g, f| {
            id[&(ends[f].0, ends[g].1)]
        })
    }
}

/// Exhaustive check of identities, composite ends, units and associativity.
pub fn validate_category(c: &FinCat) -> Option<Violation> {
    for x in 0..c.object_count() {
        let i = c.identity(x);
        if c.dom(i) != x || c.cod(i) != x {
            return Some(Violation::BadIdentity { object: x });
        }
    }
    for g in 0..c.morphism_count() {
        for &f in c.into(c.dom(g)) {
            let gf = c.compose(g, f);
            if gf >= c.morphism_count() {
                return Some(Violation::OutOfRange { what: "morphism", index: gf });
            }
            if c.dom(gf) != c.dom(f) || c.cod(gf) != c.cod(g) {
                return Some(Violation::WrongEnds { g, f });
            }
        }
    }
    for f in 0..c.morphism_count() {
        if c.compose(f, c.identity(c.dom(f))) != f || c.compose(c.identity(c.cod(f)), f) != f {
            return Some(Violation::Unit { morphism: f });
        }
    }
    for g in 0..c.morphism_count() {
        for &f in c.into(c.dom(g)) {
            let gf = c.compose(g, f);
            for &h in c.out_of(c.cod(g)) {
                if c.compose(h, gf) != c.compose(c.compose(h, g), f) {
                    return Some(Violation::Associativity { h, g, f });
                }
            }
        }
    }
    None
}

/// A functor recorded by its object and morphism maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl FinFunctor {
    pub fn identity(c: &FinCat) -> Self {
        FinFunctor { object_map: (0..c.object_count()).collect(), morphism_map: (0..c.morphism_count()).collect() }
    }

    pub fn obj(&self, x: usize) -> usize {
        self.object_map[x]
    }

    pub fn mor(&self, f: usize) -> usize {
        self.morphism_map[f]
    }

    /// Ends, identities and composites are preserved.
    pub fn is_valid(&self, source: &FinCat, target: &FinCat) -> bool {
        if self.object_map.len() != source.object_count() || self.morphism_map.len() != source.morphism_count() {
            return false;
        }
        let ends = (0..source.morphism_count()).all(|f| {
            let g = self.mor(f);
            g < target.morphism_count()
                && target.dom(g) == self.obj(source.dom(f))
                && target.cod(g) == self.obj(source.cod(f))
        });
        ends && (0..source.object_count()).all(|x| self.mor(source.identity(x)) == target.identity(self.obj(x)))
            && (0..source.morphism_count()).all(|g| {
                source
                    .into(source.dom(g))
                    .iter()
                    .all(|&f| self.mor(source.compose(g, f)) == target.compose(self.mor(g), self.mor(f)))
            })
    }

    /// `self ∘ first`
    pub fn after(&self, first: &FinFunctor) -> FinFunctor {
        FinFunctor {
            object_map: first.object_map.iter().map(|&x| self.obj(x)).collect(),
            morphism_map: first.morphism_map.iter().map(|&f| self.mor(f)).collect(),
        }
    }

    /// Fully faithful on the given categories.
    pub fn is_fully_faithful(&self, source: &FinCat, target: &FinCat) -> bool {
        (0..source.object_count()).all(|x| {
            (0..source.object_count()).all(|y| {
                let mut a: Vec<usize> = source.hom(x, y).iter().map(|&f| self.mor(f)).collect();
                a.sort_unstable();
                a.dedup();
                let b = target.hom(self.obj(x), self.obj(y));
                a.len() == source.hom(x, y).len() && a == b
            })
        })
    }
}

/// The full subcategory on `objects` (sorted, deduplicated) and its inclusion.
pub fn full_subcategory(c: &FinCat, objects: &[usize]) -> Result<(FinCat, FinFunctor)> {
    let mut objs = objects.to_vec();
    objs.sort_unstable();
    objs.dedup();
    if objs.is_empty() {
        return Err(Error::EmptyObjectSet);
    }
    let mut new_obj = vec![usize::MAX; c.object_count()];
    for (i, &x) in objs.iter().enumerate() {
        new_obj[x] = i;
    }
    let kept: Vec<usize> = (0..c.morphism_count())
        .filter(|&f| new_obj[c.dom(f)] != usize::MAX && new_obj[c.cod(f)] != usize::MAX)
        .collect();
    let mut new_mor = vec![usize::MAX; c.morphism_count()];
    for (i, &f) in kept.iter().enumerate() {
        new_mor[f] = i;
    }
    let morphisms = kept
        .iter()
        .map(|&f| Morphism { dom: new_obj[c.dom(f)], cod: new_obj[c.cod(f)], label: c.morphism(f).label.clone() })
        .collect();
    let sub = FinCat::from_fn(
        objs.iter().map(|&x| c.object_label(x).into()).collect(),
        morphisms,
        objs.iter().map(|&x| new_mor[c.identity(x)]).collect(),
        |g, f| new_mor[c.compose(kept[g], kept[f])],
    );
    Ok((sub, FinFunctor { object_map: objs, morphism_map: kept }))
}

/// `α/x` (`under = false`, objects `(d, t: α d → x)`) or `x/α`
/// (`under = true`, objects `(d, t: x → α d)`).
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub cat: FinCat,
    /// `(d, t)` per comma object.
    pub pairs: Vec<(usize, usize)>,
    /// Comma object, morphism of the base category
    pub projection: FinFunctor,
    pub apex: usize,
    pub under: bool,
}

fn comma(d: &FinCat, c: &FinCat, alpha: &FinFunctor, x: usize, under: bool) -> CommaCategory {
    let mut pairs = Vec::new();
    for dd in 0..d.object_count() {
        let ts = if under { c.hom(x, alpha.obj(dd)) } else { c.hom(alpha.obj(dd), x) };
        for t in ts {
            pairs.push((dd, t));
        }
    }
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut morphisms = Vec::new();
    let mut proj = Vec::new();
    let mut mor_index = BTreeMap::new();
    for (i, &(d1, t1)) in pairs.iter().enumerate() {
        for &u in d.out_of(d1) {
            let d2 = d.cod(u);
            let au = alpha.mor(u);
            let t2 = if under { Some(c.compose(au, t1)) } else { None };
            let targets: Vec<usize> = match t2 {
                Some(t2) => vec![index[&(d2, t2)]],
                None => c
                    .hom(alpha.obj(d2), x)
                    .into_iter()
                    .filter(|&t2| c.compose(t2, au) == t1)
                    .map(|t2| index[&(d2, t2)])
                    .collect(),
            };
            for j in targets {
                mor_index.insert((i, j, u), morphisms.len());
                morphisms.push(Morphism { dom: i, cod: j, label: d.morphism(u).label.clone() });
                proj.push(u);
            }
        }
    }
    let identities: Vec<usize> =
        pairs.iter().enumerate().map(|(i, &(dd, _))| mor_index[&(i, i, d.identity(dd))]).collect();
    let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.dom, m.cod)).collect();
    let cat = FinCat::from_fn(
        pairs.iter().map(|&(dd, t)| format!("({}, {})", d.object_label(dd), c.morphism(t).label)).collect(),
        morphisms,
        identities,
        |g, f| mor_index[&(ends[f].0, ends[g].1, d.compose(proj[g], proj[f]))],
    );
    CommaCategory {
        projection: FinFunctor { object_map: pairs.iter().map(|p| p.0).collect(), morphism_map: proj },
        cat,
        pairs,
        apex: x,
        under,
    }
}

/// `α/x`: objects `(d, t: α(d) → x)`, morphisms `u` with `t′ ∘ α(u) = t`.
pub fn comma_category(d: &FinCat, c: &FinCat, alpha: &FinFunctor, x: usize) -> CommaCategory {
    comma(d, c, alpha, x, false)
}

/// `x/α`: objects `(d, t: x → α(d))`, morphisms `u` with `α(u) ∘ t = t′`.
pub fn under_category(d: &FinCat, c: &FinCat, alpha: &FinFunctor, x: usize) -> CommaCategory {
    comma(d, c, alpha, x, true)
}

/// A skeleton together with the data of the equivalence.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub cat: FinCat,
    /// Skeleton → original.
    pub inclusion: FinFunctor,
    /// Original → skeleton.
    pub retraction: FinFunctor,
    /// Per original object, the chosen isomorphism to its representative.
    pub transport: Vec<usize>,
}

/// One object per isomorphism class, each the least index of its class.
pub fn skeleton(c: &FinCat) -> Skeleton {
    let n = c.object_count();
    let mut transport = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if transport[x] != usize::MAX {
            continue;
        }
        reps.push(x);
        transport[x] = c.identity(x);
        for y in x + 1..n {
            if transport[y] == usize::MAX {
                if let Some(f) = c.hom(y, x).into_iter().find(|&f| c.is_iso(f)) {
                    transport[y] = f;
                }
            }
        }
    }
    let (cat, inclusion) = full_subcategory(c, &reps).expect("nonempty");
    let mut back = vec![usize::MAX; c.morphism_count()];
    for (i, &f) in inclusion.morphism_map.iter().enumerate() {
        back[f] = i;
    }
    let mut skel_obj = vec![0; n];
    for (i, &r) in reps.iter().enumerate() {
        skel_obj[r] = i;
    }
    let object_map: Vec<usize> = (0..n).map(|x| skel_obj[c.cod(transport[x])]).collect();
    let morphism_map = (0..c.morphism_count())
        .map(|f| {
            let (x, y) = (c.dom(f), c.cod(f));
            let back_x = c.inverse(transport[x]).expect("transport maps are isomorphisms");
            back[c.compose(transport[y], c.compose(f, back_x))]
        })
        .collect();
    Skeleton { cat, inclusion, retraction: FinFunctor { object_map, morphism_map }, transport }
}

/// A composable chain `x₀ → x₁ → … → xₙ`; `morphisms[i]` is `fᵢ₊₁`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    pub start: usize,
    pub morphisms: Vec<usize>,
}

impl Chain {
    pub fn end(&self, c: &FinCat) -> usize {
        self.morphisms.last().map_or(self.start, |&f| c.cod(f))
    }
}

/// Number of `n`-chains, saturating.
pub fn chain_count(c: &FinCat, n: usize, normalized: bool) -> u64 {
    // ending[x] = number of chains of the current length ending at x
    let mut ending: Vec<u64> = vec![1; c.object_count()];
    for _ in 0..n {
        let mut next = vec![0u64; c.object_count()];
        for f in 0..c.morphism_count() {
            if normalized && c.is_identity(f) {
                continue;
            }
            next[c.cod(f)] = next[c.cod(f)].saturating_add(ending[c.dom(f)]);
        }
        ending = next;
    }
    ending.iter().fold(0u64, |a, &b| a.saturating_add(b))
}

/// All `n`-chains in lexicographic order of morphism ids (objects for `n = 0`).
pub fn nerve_chains(c: &FinCat, n: usize, normalized: bool, limit: u64) -> Result<Vec<Chain>> {
    if chain_count(c, n, normalized) > limit {
        return Err(Error::ChainCountGuardExceeded { limit });
    }
    if n == 0 {
        return Ok((0..c.object_count()).map(|x| Chain { start: x, morphisms: Vec::new() }).collect());
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(c: &FinCat, n: usize, normalized: bool, cur: &mut Vec<usize>, out: &mut Vec<Chain>) {
        if cur.len() == n {
            out.push(Chain { start: c.dom(cur[0]), morphisms: cur.clone() });
            return;
        }
        let cands: &[usize] = match cur.last() {
            Some(&f) => c.out_of(c.cod(f)),
            None => &[],
        };
        let all: Vec<usize>;
        let cands = if cur.is_empty() {
            all = (0..c.morphism_count()).collect();
            &all[..]
        } else {
            cands
        };
        for &f in cands {
            if normalized && c.is_identity(f) {
                continue;
            }
            cur.push(f);
            rec(c, n, normalized, cur, out);
            cur.pop();
        }
    }
    rec(c, n, normalized, &mut cur, &mut out);
    Ok(out)
}

/// Nonempty, every pair of objects has a cocone, every parallel pair is
/// coequalised by some morphism.
pub fn is_filtered(c: &FinCat) -> bool {
    let n = c.object_count();
    if n == 0 {
        return false;
    }
    let reach = |a: usize, b: usize| !c.hom(a, b).is_empty();
    for a in 0..n {
        for b in a + 1..n {
            if !(0..n).any(|z| reach(a, z) && reach(b, z)) {
                return false;
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let hs = c.hom(a, b);
            for (i, &f) in hs.iter().enumerate() {
                for &g in &hs[i + 1..] {
                    if !c.out_of(b).iter().any(|&h| c.compose(h, f) == c.compose(h, g)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Connected components of the underlying graph, labelled by least object.
pub fn components(c: &FinCat) -> Vec<usize> {
    let n = c.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for f in 0..c.morphism_count() {
        let a = find(&mut parent, c.dom(f));
        let b = find(&mut parent, c.cod(f));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// The opposite category; morphism ids are kept.
pub fn opposite(c: &FinCat) -> FinCat {
    let morphisms = c.morphisms().iter().map(|m| Morphism { dom: m.cod, cod: m.dom, label: m.label.clone() }).collect();
    FinCat::from_fn(c.object_labels().to_vec(), morphisms, c.identities().to_vec(), |g, f| c.compose(f, g))
}
