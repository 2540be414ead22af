//! Invertible presheaves on `O_p°(G)` as unit-valued 1-cocycles.
//!
//! Units `k^×` are held additively as `Z/m` with `m = q − 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{category_cohomology, cech_cohomology, g_m, units};
use crate::fincat::{skeleton, FinCat};
use crate::group::{is_prime, PermGroup};
use crate::linalg::{AbGroup, Integer, Lattice};
use crate::orbit::{OrbitCategory, OrbitTower, Variant};
use crate::presheaf::AbPresheaf;
use crate::site::sipp_topology;
use crate::{Error, Guards, Result};

/// One scalar in `Z/modulus` per morphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitCocycle {
    pub modulus: u64,
    pub scalars: Vec<u64>,
}

impl UnitCocycle {
    pub fn trivial(c: &FinCat, modulus: u64) -> Self {
        UnitCocycle { modulus, scalars: vec![0; c.morphism_count()] }
    }

    /// `λ(id) = 0` and `λ(g∘f) = λ(g) + λ(f)`.
    pub fn is_cocycle(&self, c: &FinCat) -> bool {
        let m = self.modulus;
        self.scalars.len() == c.morphism_count()
            && self.scalars.iter().all(|&s| s < m.max(1))
            && c.identities().iter().all(|&i| self.scalars[i] == 0)
            && (0..c.morphism_count()).all(|g| {
                c.into(c.dom(g))
                    .iter()
                    .all(|&f| self.scalars[c.compose(g, f)] == (self.scalars[g] + self.scalars[f]) % m.max(1))
            })
    }

    /// `λ′(f: x → y) = λ(f) − μ(x) + μ(y)`
    pub fn twist(&self, c: &FinCat, mu: &[u64]) -> UnitCocycle {
        let m = self.modulus.max(1);
        UnitCocycle {
            modulus: self.modulus,
            scalars: (0..c.morphism_count())
                .map(|f| (self.scalars[f] + m - mu[c.dom(f)] % m + mu[c.cod(f)]) % m)
                .collect(),
        }
    }

    /// The inverse presheaf: scalars negated.
    pub fn dual(&self) -> UnitCocycle {
        let m = self.modulus.max(1);
        UnitCocycle { modulus: self.modulus, scalars: self.scalars.iter().map(|&s| (m - s) % m).collect() }
    }

    pub fn tensor(&self, other: &UnitCocycle) -> UnitCocycle {
        let m = self.modulus.max(1);
        UnitCocycle {
            modulus: self.modulus,
            scalars: self.scalars.iter().zip(&other.scalars).map(|(a, b)| (a + b) % m).collect(),
        }
    }

    /// The line presheaf with value `k` everywhere and `F(f)` multiplication
    /// by `λ(f)`.
    pub fn to_line(&self, c: &FinCat) -> LinePresheaf {
        LinePresheaf::on(c, self.modulus, self.scalars.iter().map(|&s| Some(s)).collect())
    }
}

/// A presheaf of `k`-vector spaces of dimension at most one: each map is a
/// unit (`Some(λ)`) or zero (`None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinePresheaf {
    pub modulus: u64,
    pub dims: Vec<usize>,
    pub maps: Vec<Option<u64>>,
}

impl LinePresheaf {
    pub fn on(c: &FinCat, modulus: u64, maps: Vec<Option<u64>>) -> Self {
        LinePresheaf { modulus, dims: vec![1; c.object_count()], maps }
    }

    /// Every value is one-dimensional, every map an isomorphism, and the
    /// maps compose.
    pub fn is_invertible(&self, c: &FinCat) -> bool {
        self.dims.len() == c.object_count()
            && self.dims.iter().all(|&d| d == 1)
            && self.maps.iter().all(Option::is_some)
            && self.as_cocycle().is_some_and(|l| l.is_cocycle(c))
    }

    pub fn as_cocycle(&self) -> Option<UnitCocycle> {
        Some(UnitCocycle { modulus: self.modulus, scalars: self.maps.iter().copied().collect::<Option<Vec<_>>>()? })
    }

    pub fn dual(&self, c: &FinCat) -> Result<LinePresheaf> {
        if !self.is_invertible(c) {
            return Err(Error::NotInvertible("dual of a non-invertible presheaf".into()));
        }
        let d = self.as_cocycle().expect("invertible").dual();
        Ok(LinePresheaf::on(c, self.modulus, d.scalars.into_iter().map(Some).collect()))
    }

    pub fn tensor(&self, c: &FinCat, other: &LinePresheaf) -> Result<LinePresheaf> {
        if !self.is_invertible(c) || !other.is_invertible(c) {
            return Err(Error::NotInvertible("tensor of a non-invertible presheaf".into()));
        }
        let t = self.as_cocycle().expect("invertible").tensor(&other.as_cocycle().expect("invertible"));
        Ok(LinePresheaf::on(c, self.modulus, t.scalars.into_iter().map(Some).collect()))
    }
}

fn coboundary_lattice(c: &FinCat, modulus: u64) -> Lattice {
    let n = c.morphism_count();
    let mut gens = Vec::new();
    for x in 0..c.object_count() {
        let mut v = vec![Integer::from(0); n];
        for f in 0..n {
            if c.dom(f) == x {
                v[f] -= 1;
            }
            if c.cod(f) == x {
                v[f] += 1;
            }
        }
        gens.push(v);
    }
    for f in 0..n {
        let mut v = vec![Integer::from(0); n];
        v[f] = Integer::from(modulus);
        gens.push(v);
    }
    Lattice::from_generators(n, &gens)
}

/// The two cocycles differ by a coboundary.
pub fn cohomologous(c: &FinCat, a: &UnitCocycle, b: &UnitCocycle) -> bool {
    let diff: Vec<Integer> =
        a.scalars.iter().zip(&b.scalars).map(|(&x, &y)| Integer::from(x) - Integer::from(y)).collect();
    coboundary_lattice(c, a.modulus).contains(&diff)
}

/// `H¹(O_p°(G), k^×)` by the bar engine.
pub fn h1_units(group: &Arc<PermGroup>, p: u64, q: u64, guards: &Guards) -> Result<AbGroup> {
    let t = OrbitCategory::new(group.clone(), Some(p), Variant::PNontrivial)?;
    category_cohomology(&t.cat, &AbPresheaf::constant(&t.cat, &units(q)), 1, guards)
}

/// Cocycle classes found by exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicResult {
    pub group: AbGroup,
    /// Lexicographically least representative of each class, sorted.
    pub classes: Vec<UnitCocycle>,
}

/// `Pic` of the skeleton of `c` with units `Z/modulus`.
pub fn pic_bruteforce(c: &FinCat, modulus: u64, limit: u64) -> Result<PicResult> {
    pic_bruteforce_full(&skeleton(c).cat, modulus, limit)
}

/// `Pic` of `c` itself: every assignment on non-identity morphisms, then
/// coboundary orbits.
pub fn pic_bruteforce_full(c: &FinCat, modulus: u64, limit: u64) -> Result<PicResult> {
    let m = modulus.max(1);
    let free: Vec<usize> = (0..c.morphism_count()).filter(|&f| !c.is_identity(f)).collect();
    let space = (m as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    let shifts = (m as u128).checked_pow(c.object_count() as u32).unwrap_or(u128::MAX);
    if space > limit as u128 || shifts > limit as u128 {
        return Err(Error::EnumerationGuardExceeded { limit });
    }
    let mut cocycles = Vec::new();
    let mut cur = vec![0u64; c.morphism_count()];
    let mut assigned = vec![false; c.morphism_count()];
    for &i in c.identities() {
        assigned[i] = true;
    }
    // factorisations g∘h = f of every morphism
    let mut factors: Vec<Vec<(usize, usize)>> = vec![Vec::new(); c.morphism_count()];
    for g in 0..c.morphism_count() {
        for &h in c.into(c.dom(g)) {
            factors[c.compose(g, h)].push((g, h));
        }
    }
    struct Search<'a> {
        c: &'a FinCat,
        free: &'a [usize],
        factors: &'a [Vec<(usize, usize)>],
        m: u64,
    }
    impl Search<'_> {
        fn ok(&self, cur: &[u64], assigned: &[bool], g: usize, h: usize) -> bool {
            let gh = self.c.compose(g, h);
            !(assigned[g] && assigned[h] && assigned[gh]) || cur[gh] == (cur[g] + cur[h]) % self.m
        }

        fn consistent(&self, cur: &[u64], assigned: &[bool], f: usize) -> bool {
            let c = self.c;
            c.into(c.dom(f)).iter().all(|&h| self.ok(cur, assigned, f, h))
                && c.out_of(c.cod(f)).iter().all(|&g| self.ok(cur, assigned, g, f))
                && self.factors[f].iter().all(|&(g, h)| self.ok(cur, assigned, g, h))
        }

        fn rec(&self, k: usize, cur: &mut Vec<u64>, assigned: &mut Vec<bool>, out: &mut Vec<Vec<u64>>) {
            if k == self.free.len() {
                out.push(cur.clone());
                return;
            }
            let f = self.free[k];
            assigned[f] = true;
            for s in 0..self.m {
                cur[f] = s;
                if self.consistent(cur, assigned, f) {
                    self.rec(k + 1, cur, assigned, out);
                }
            }
            cur[f] = 0;
            assigned[f] = false;
        }
    }
    let search = Search { c, free: &free, factors: &factors, m };
    search.rec(0, &mut cur, &mut assigned, &mut cocycles);
    let mus = all_vectors(c.object_count(), m);
    let canonical = |s: &[u64]| -> Vec<u64> {
        let l = UnitCocycle { modulus, scalars: s.to_vec() };
        mus.iter().map(|mu| l.twist(c, mu).scalars).min().expect("at least the zero shift")
    };
    let classes: BTreeSet<Vec<u64>> = cocycles.iter().map(|s| canonical(s)).collect();
    let classes: Vec<Vec<u64>> = classes.into_iter().collect();
    let index: BTreeMap<&Vec<u64>, usize> = classes.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = classes.len();
    let zero = index[&vec![0u64; c.morphism_count()]];
    let add = |a: usize, b: usize| -> usize {
        let s: Vec<u64> = classes[a].iter().zip(&classes[b]).map(|(x, y)| (x + y) % m).collect();
        index[&canonical(&s)]
    };
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| add(a, b)).collect()).collect();
    let group = group_from_table(&table, zero);
    Ok(PicResult { group, classes: classes.into_iter().map(|scalars| UnitCocycle { modulus, scalars }).collect() })
}

fn all_vectors(len: usize, m: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * m as usize);
        for v in &out {
            for s in 0..m {
                let mut w = v.clone();
                w.push(s);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// The finite abelian group with the given addition table, from the number
/// of elements killed by each prime power.
pub fn group_from_table(table: &[Vec<usize>], zero: usize) -> AbGroup {
    let n = table.len();
    let times = |x: usize, k: usize| (0..k).fold(zero, |acc, _| table[acc][x]);
    let mut factors = Vec::new();
    let mut rest = n;
    let mut l = 2usize;
    while rest > 1 {
        if !rest.is_multiple_of(l) || !is_prime(l as u64) {
            l += 1;
            continue;
        }
        while rest.is_multiple_of(l) {
            rest /= l;
        }
        // counts[k] = |{x : l^k x = 0}|
        let mut counts = vec![1usize];
        let mut pk = 1usize;
        loop {
            pk *= l;
            let c = (0..n).filter(|&x| times(x, pk) == zero).count();
            let prev = *counts.last().expect("nonempty");
            counts.push(c);
            if c == prev {
                break;
            }
        }
        // number of cyclic factors of order at least l^k
        let mut at_least: Vec<usize> = Vec::new();
        for k in 1..counts.len() {
            let mut ratio = counts[k] / counts[k - 1];
            let mut e = 0;
            while ratio > 1 {
                ratio /= l;
                e += 1;
            }
            at_least.push(e);
        }
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..at_least[k] - next {
                factors.push(l.pow(k as u32 + 1) as u64);
            }
        }
        l += 1;
    }
    AbGroup::direct_sum(factors.iter().map(|&f| AbGroup::cyclic(f)).collect::<Vec<_>>().iter())
}

/// `Hom(G, Z/modulus)`, as values on all elements.
pub fn characters(g: &PermGroup, modulus: u64) -> Vec<Vec<u64>> {
    let m = modulus.max(1);
    let gens: Vec<usize> = g.generators().iter().map(|p| g.index_of(p).expect("generators are elements")).collect();
    let mut out = Vec::new();
    for assignment in all_vectors(gens.len(), m) {
        let mut value = vec![u64::MAX; g.order()];
        value[0] = 0;
        let mut queue = vec![0usize];
        let mut ok = true;
        while let Some(x) = queue.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let v = (value[x] + assignment[k]) % m;
                if value[y] == u64::MAX {
                    value[y] = v;
                    queue.push(y);
                } else if value[y] != v {
                    ok = false;
                }
            }
        }
        if ok && (0..g.order()).all(|a| (0..g.order()).all(|b| value[g.mul(a, b)] == (value[a] + value[b]) % m)) {
            out.push(value);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterEmbedding {
    /// Characters whose cocycle is well defined, with their cocycles.
    pub characters: Vec<Vec<u64>>,
    pub cocycles: Vec<UnitCocycle>,
    /// Characters not constant on some coset, with the reason.
    pub ill_defined: Vec<(Vec<u64>, String)>,
    pub pairwise_distinct: bool,
    pub homomorphism: bool,
}

impl CharacterEmbedding {
    pub fn injective(&self) -> bool {
        self.pairwise_distinct
    }
}

/// `λ_χ(G/H → G/K, gK) = χ(g)`, provided `χ` is constant on each coset.
pub fn character_cocycle(o: &OrbitCategory, chi: &[u64], modulus: u64) -> Result<UnitCocycle> {
    let g = &*o.group;
    for f in 0..o.cat.morphism_count() {
        let k = o.subgroup(o.cat.cod(f));
        let x = o.morphism_coset[f];
        if k.members().iter().any(|y| chi[g.mul(x, y)] != chi[x]) {
            return Err(Error::WellDefinednessFailure(format!("not constant on the coset of morphism {f}")));
        }
    }
    let l = UnitCocycle { modulus, scalars: o.morphism_coset.iter().map(|&x| chi[x]).collect() };
    if !l.is_cocycle(&o.cat) {
        return Err(Error::WellDefinednessFailure("not a cocycle".into()));
    }
    Ok(l)
}

/// `Hom(G, Z/(q−1)) → Pic` on `O_p°(G)`. Characters that do not vanish on
/// the `p`-subgroups are reported, not embedded.
pub fn character_embedding(group: &Arc<PermGroup>, p: u64, q: u64) -> Result<CharacterEmbedding> {
    let o = OrbitCategory::new(group.clone(), Some(p), Variant::PNontrivial)?;
    let m = q.saturating_sub(1);
    let mut cocycles = Vec::new();
    let mut ill_defined = Vec::new();
    let all = characters(group, m);
    let mut characters = Vec::new();
    for chi in all {
        match character_cocycle(&o, &chi, m) {
            Ok(l) => {
                characters.push(chi);
                cocycles.push(l);
            }
            Err(e) => ill_defined.push((chi, format!("{e}"))),
        }
    }
    let c = &o.cat;
    let pairwise_distinct =
        (0..cocycles.len()).all(|i| (i + 1..cocycles.len()).all(|j| !cohomologous(c, &cocycles[i], &cocycles[j])));
    let mm = m.max(1);
    let homomorphism = (0..characters.len()).all(|i| {
        (0..characters.len()).all(|j| {
            let sum: Vec<u64> = characters[i].iter().zip(&characters[j]).map(|(a, b)| (a + b) % mm).collect();
            characters
                .binary_search(&sum)
                .is_ok_and(|k| cohomologous(c, &cocycles[k], &cocycles[i].tensor(&cocycles[j])))
        })
    });
    Ok(CharacterEmbedding { characters, cocycles, ill_defined, pairwise_distinct, homomorphism })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylowTrivialReport {
    pub bar: AbGroup,
    pub cech_ext: AbGroup,
    pub bruteforce: Option<AbGroup>,
    pub bruteforce_skipped: Option<String>,
    pub character_image: usize,
}

impl SylowTrivialReport {
    pub fn agree(&self) -> bool {
        self.bar.is_isomorphic(&self.cech_ext) && self.bruteforce.as_ref().is_none_or(|b| b.is_isomorphic(&self.bar))
    }
}

/// `T_k(G, P)` three ways: bar cohomology, the Čech/Ext engine at `G/G`,
/// and brute-force Pic on the skeleton.
pub fn sylow_trivial_group(group: &Arc<PermGroup>, p: u64, q: u64, guards: &Guards) -> Result<SylowTrivialReport> {
    let t = OrbitTower::new(group.clone(), p)?;
    let bar = h1_units(group, p, q, guards)?;
    let gm = g_m(&t, q);
    let cech_ext = cech_cohomology(&t.full.cat, t.top(), &gm, &sipp_topology(&t), 1, guards)?;
    let (bruteforce, bruteforce_skipped) =
        match pic_bruteforce(&t.p_nontrivial.cat, q.saturating_sub(1), guards.max_enumeration) {
            Ok(r) => (Some(r.group), None),
            Err(e) if e.is_guard() => (None, Some(format!("{e}"))),
            Err(e) => return Err(e),
        };
    let character_image = character_embedding(group, p, q)?.cocycles.len();
    Ok(SylowTrivialReport { bar, cech_ext, bruteforce, bruteforce_skipped, character_image })
}
