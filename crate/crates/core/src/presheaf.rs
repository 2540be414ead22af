//! Presheaves of finite sets and of finitely generated abelian groups.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::fincat::{FinCat, FinFunctor};
use crate::linalg::{AbGroup, AbMap, Integer, Matrix};

/// A presheaf of finite sets: `values[x]` elements at `x`, and for
/// `f: x → y` a function `maps[f]: F(y) → F(x)` as an index table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPresheaf {
    pub values: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl SetPresheaf {
    pub fn constant(c: &FinCat, n: usize) -> Self {
        SetPresheaf { values: vec![n; c.object_count()], maps: vec![(0..n).collect(); c.morphism_count()] }
    }

    pub fn is_functorial(&self, c: &FinCat) -> bool {
        if self.values.len() != c.object_count() || self.maps.len() != c.morphism_count() {
            return false;
        }
        let shapes = (0..c.morphism_count()).all(|f| {
            self.maps[f].len() == self.values[c.cod(f)] && self.maps[f].iter().all(|&a| a < self.values[c.dom(f)])
        });
        shapes
            && (0..c.object_count()).all(|x| self.maps[c.identity(x)].iter().enumerate().all(|(i, &a)| i == a))
            && (0..c.morphism_count()).all(|g| {
                c.into(c.dom(g)).iter().all(|&f| {
                    let gf = c.compose(g, f);
                    (0..self.values[c.cod(g)]).all(|a| self.maps[gf][a] == self.maps[f][self.maps[g][a]])
                })
            })
    }

    /// `F ∘ α`
    pub fn restrict(&self, alpha: &FinFunctor) -> SetPresheaf {
        SetPresheaf {
            values: alpha.object_map.iter().map(|&x| self.values[x]).collect(),
            maps: alpha.morphism_map.iter().map(|&f| self.maps[f].clone()).collect(),
        }
    }
}

/// A presheaf of abelian groups; `maps[f]` is the matrix of
/// `M(f): M(cod f) → M(dom f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbPresheaf {
    pub values: Vec<AbGroup>,
    pub maps: Vec<Matrix>,
}

impl AbPresheaf {
    pub fn from_fn(c: &FinCat, values: Vec<AbGroup>, mut map: impl FnMut(usize) -> Matrix) -> Self {
        let maps = (0..c.morphism_count()).map(&mut map).collect();
        AbPresheaf { values, maps }
    }

    pub fn constant(c: &FinCat, a: &AbGroup) -> Self {
        let k = a.ngens();
        AbPresheaf { values: vec![a.clone(); c.object_count()], maps: vec![Matrix::identity(k); c.morphism_count()] }
    }

    pub fn zero(c: &FinCat) -> Self {
        Self::constant(c, &AbGroup::trivial())
    }

    /// `Z/n` at the objects in `support`, zero elsewhere; the support must
    /// be closed under passing through intermediate objects.
    pub fn supported(c: &FinCat, a: &AbGroup, support: &[bool]) -> Self {
        let values: Vec<AbGroup> =
            (0..c.object_count()).map(|x| if support[x] { a.clone() } else { AbGroup::trivial() }).collect();
        AbPresheaf::from_fn(c, values.clone(), |f| {
            let (x, y) = (c.dom(f), c.cod(f));
            if support[x] && support[y] {
                Matrix::identity(a.ngens())
            } else {
                Matrix::zeros(values[x].ngens(), values[y].ngens())
            }
        })
    }

    pub fn value(&self, x: usize) -> &AbGroup {
        &self.values[x]
    }

    /// `M(f)` as a homomorphism `M(cod f) → M(dom f)`.
    pub fn map(&self, c: &FinCat, f: usize) -> AbMap {
        AbMap::new(self.values[c.cod(f)].clone(), self.values[c.dom(f)].clone(), self.maps[f].clone())
    }

    pub fn apply(&self, c: &FinCat, f: usize, v: &[Integer]) -> Vec<Integer> {
        self.values[c.dom(f)].reduced(self.maps[f].mul_vec(v))
    }

    /// Well-defined maps, identities to identities, `M(g∘f) = M(f)∘M(g)`.
    pub fn is_functorial(&self, c: &FinCat) -> bool {
        if self.values.len() != c.object_count() || self.maps.len() != c.morphism_count() {
            return false;
        }
        for f in 0..c.morphism_count() {
            let m = &self.maps[f];
            if m.rows() != self.values[c.dom(f)].ngens() || m.cols() != self.values[c.cod(f)].ngens() {
                return false;
            }
            if !self.map(c, f).is_well_defined() {
                return false;
            }
        }
        for x in 0..c.object_count() {
            if !self.map(c, c.identity(x)).agrees_with(&AbMap::identity(&self.values[x])) {
                return false;
            }
        }
        (0..c.morphism_count()).all(|g| {
            c.into(c.dom(g)).iter().all(|&f| {
                let gf = c.compose(g, f);
                self.map(c, gf).agrees_with(&self.map(c, f).after(&self.map(c, g)))
            })
        })
    }

    /// `M ∘ α`
    pub fn restrict(&self, alpha: &FinFunctor) -> AbPresheaf {
        AbPresheaf {
            values: alpha.object_map.iter().map(|&x| self.values[x].clone()).collect(),
            maps: alpha.morphism_map.iter().map(|&f| self.maps[f].clone()).collect(),
        }
    }

    /// Objectwise free of finite rank.
    pub fn is_objectwise_free(&self) -> bool {
        self.values.iter().all(|v| v.moduli().iter().all(Zero::is_zero))
    }

    /// Objectwise isomorphic values (a necessary condition for isomorphism,
    /// and the comparison used where natural maps are not at hand).
    pub fn values_isomorphic(&self, other: &AbPresheaf) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.is_isomorphic(b))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(AbGroup::is_trivial)
    }
}

/// A natural transformation `M → N`, one matrix per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbNat {
    pub components: Vec<Matrix>,
}

impl AbNat {
    pub fn component(&self, m: &AbPresheaf, n: &AbPresheaf, x: usize) -> AbMap {
        AbMap::new(m.values[x].clone(), n.values[x].clone(), self.components[x].clone())
    }

    /// Naturality squares commute and every component is well defined.
    pub fn is_natural(&self, c: &FinCat, m: &AbPresheaf, n: &AbPresheaf) -> bool {
        (0..c.object_count()).all(|x| self.component(m, n, x).is_well_defined())
            && (0..c.morphism_count()).all(|f| {
                let (x, y) = (c.dom(f), c.cod(f));
                let a = self.component(m, n, x).after(&m.map(c, f));
                let b = n.map(c, f).after(&self.component(m, n, y));
                a.agrees_with(&b)
            })
    }

    /// Every component is an isomorphism.
    pub fn is_iso(&self, m: &AbPresheaf, n: &AbPresheaf) -> bool {
        (0..self.components.len()).all(|x| self.component(m, n, x).is_isomorphism())
    }
}

/// `Z` everywhere with identity maps.
pub fn z_constant(c: &FinCat) -> AbPresheaf {
    AbPresheaf::constant(c, &AbGroup::free(1))
}

/// Unit vector `eᵢ` in `Zⁿ`.
pub fn unit_vector(n: usize, i: usize) -> Vec<Integer> {
    let mut v = vec![Integer::zero(); n];
    v[i] = Integer::one();
    v
}

/// How the maps of a random cyclic presheaf are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicKind {
    /// `n_x | n_y` for `x → y`; maps reduce mod `n_x`.
    Reduction,
    /// `n_y | n_x` for `x → y`; maps multiply by `n_x / n_y`.
    Inclusion,
}

/// Objects reachable from each object (including itself).
fn reachable(c: &FinCat) -> Vec<Vec<usize>> {
    (0..c.object_count())
        .map(|x| {
            let mut seen = vec![false; c.object_count()];
            let mut stack = vec![x];
            seen[x] = true;
            while let Some(y) = stack.pop() {
                for &f in c.out_of(y) {
                    let z = c.cod(f);
                    if !seen[z] {
                        seen[z] = true;
                        stack.push(z);
                    }
                }
            }
            (0..c.object_count()).filter(|&z| seen[z]).collect()
        })
        .collect()
}

/// A presheaf with cyclic values dividing `base`, chosen per object by
/// `pick(k)` (uniform in `0..k`), optionally twisted by a `Z/2`-valued
/// cocycle `sign`.
pub fn random_cyclic_presheaf(
    c: &FinCat,
    base: u64,
    kind: CyclicKind,
    sign: Option<&[u64]>,
    pick: &mut impl FnMut(u64) -> u64,
) -> AbPresheaf {
    use num_integer::Integer as _;
    let divisors: Vec<u64> = (1..=base.max(1)).filter(|d| base.is_multiple_of(*d)).collect();
    let seeds: Vec<u64> = (0..c.object_count()).map(|_| divisors[pick(divisors.len() as u64) as usize]).collect();
    let reach = reachable(c);
    let n: Vec<u64> = reach
        .iter()
        .map(|r| match kind {
            CyclicKind::Reduction => r.iter().fold(0, |acc, &y| acc.gcd(&seeds[y])),
            CyclicKind::Inclusion => r.iter().fold(1, |acc, &y| acc.lcm(&seeds[y])),
        })
        .collect();
    let values: Vec<AbGroup> = n.iter().map(|&k| AbGroup::cyclic(k)).collect();
    AbPresheaf::from_fn(c, values.clone(), |f| {
        let (x, y) = (c.dom(f), c.cod(f));
        let (rx, ry) = (values[x].ngens(), values[y].ngens());
        if rx == 0 || ry == 0 {
            return Matrix::zeros(rx, ry);
        }
        let mut a = match kind {
            CyclicKind::Reduction => 1,
            CyclicKind::Inclusion => (n[x] / n[y]) as i64,
        };
        if sign.is_some_and(|s| s[f] % 2 == 1) {
            a = -a;
        }
        let a = Integer::from(a).mod_floor(&Integer::from(n[x]));
        let mut m = Matrix::zeros(1, 1);
        m.set(0, 0, a);
        m
    })
}
