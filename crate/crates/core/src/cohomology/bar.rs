//! Bar cochain complexes of a finite category with presheaf coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::fincat::{nerve_chains, skeleton, Chain, FinCat};
use crate::linalg::{AbGroup, AbMap, CochainComplexZ, Cohomology, Integer, Matrix};
use crate::presheaf::AbPresheaf;
use crate::{Error, Guards, Result};

/// The bar complex with its chain bases.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub complex: CochainComplexZ,
    /// Chains per degree, lexicographic in morphism ids.
    pub chains: Vec<Vec<Chain>>,
    /// Offset of each chain's block inside `Cⁿ`.
    pub offsets: Vec<Vec<usize>>,
    pub normalized: bool,
}

impl BarComplex {
    pub fn cohomology(&self, i: usize) -> Cohomology {
        self.complex.cohomology(i)
    }

    /// Position of a chain among the degree-`n` chains.
    pub fn chain_position(&self, n: usize, key: &[usize], start: usize) -> Option<usize> {
        if n == 0 {
            return self.chains[0].iter().position(|c| c.start == start);
        }
        self.chains[n].binary_search_by(|c| c.morphisms.as_slice().cmp(key)).ok()
    }
}

fn chain_key_index(chains: &[Chain]) -> BTreeMap<Vec<usize>, usize> {
    chains.iter().enumerate().map(|(i, c)| (c.morphisms.clone(), i)).collect()
}

/// Size limits for the bar engine: the number of chains in each degree and
/// the rank of each dense cochain group. A bare `u64` is a chain limit with
/// the default dimension limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub chains: u64,
    pub dim: usize,
}

impl From<u64> for Limits {
    fn from(chains: u64) -> Self {
        Limits { chains, dim: Guards::default().max_matrix_dim }
    }
}

impl From<&Guards> for Limits {
    fn from(g: &Guards) -> Self {
        Limits { chains: g.max_chains, dim: g.max_matrix_dim }
    }
}

/// `Cⁿ = ⊕_{x₀ → … → xₙ} M(x₀)` for `n ≤ n_max`, with the alternating-face
/// differential. Normalized complexes drop chains containing identities.
pub fn bar_complex(
    c: &FinCat,
    m: &AbPresheaf,
    n_max: usize,
    normalized: bool,
    limit: impl Into<Limits>,
) -> Result<BarComplex> {
    let limit = limit.into();
    let mut chains = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let level = nerve_chains(c, n, normalized, limit.chains)?;
        let rank: usize = level.iter().map(|ch| m.values[ch.start].ngens()).sum();
        if rank > limit.dim {
            return Err(Error::MatrixGuardExceeded { limit: limit.dim });
        }
        chains.push(level);
    }
    let mut groups = Vec::with_capacity(n_max + 1);
    let mut offsets = Vec::with_capacity(n_max + 1);
    for level in &chains {
        let mut off = Vec::with_capacity(level.len());
        let mut acc = 0;
        for ch in level {
            off.push(acc);
            acc += m.values[ch.start].ngens();
        }
        offsets.push(off);
        groups.push(AbGroup::direct_sum(level.iter().map(|ch| &m.values[ch.start])));
    }
    let one = Integer::from(1);
    let minus = Integer::from(-1);
    let mut differentials = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let src_index = if n == 0 { BTreeMap::new() } else { chain_key_index(&chains[n]) };
        let lookup = |key: &[usize], start: usize| -> usize {
            if n == 0 {
                start
            } else {
                src_index[key]
            }
        };
        let mut d = Matrix::zeros(groups[n + 1].ngens(), groups[n].ngens());
        for (t, tau) in chains[n + 1].iter().enumerate() {
            let r0 = offsets[n + 1][t];
            let x0 = tau.start;
            let k = m.values[x0].ngens();
            if k == 0 {
                continue;
            }
            let fs = &tau.morphisms;
            let id = Matrix::identity(k);
            // face 0
            let f1 = fs[0];
            let s = lookup(&fs[1..], c.cod(f1));
            d.add_block(r0, offsets[n][s], &m.maps[f1], &one);
            // inner faces
            for i in 1..=n {
                let comp = c.compose(fs[i], fs[i - 1]);
                if normalized && c.is_identity(comp) {
                    continue;
                }
                let mut key = Vec::with_capacity(n);
                key.extend_from_slice(&fs[..i - 1]);
                key.push(comp);
                key.extend_from_slice(&fs[i + 1..]);
                let s = lookup(&key, x0);
                d.add_block(r0, offsets[n][s], &id, if i % 2 == 0 { &one } else { &minus });
            }
            // last face
            let s = lookup(&fs[..n], x0);
            d.add_block(r0, offsets[n][s], &id, if (n + 1) % 2 == 0 { &one } else { &minus });
        }
        differentials.push(AbMap::new(groups[n].clone(), groups[n + 1].clone(), d).reduced());
    }
    Ok(BarComplex { complex: CochainComplexZ::new(groups, differentials), chains, offsets, normalized })
}

/// `Hⁱ(C, M)` from the normalized bar complex of the skeleton.
pub fn category_cohomology(c: &FinCat, m: &AbPresheaf, i: usize, limit: impl Into<Limits>) -> Result<AbGroup> {
    let sk = skeleton(c);
    let ms = m.restrict(&sk.inclusion);
    category_cohomology_full(&sk.cat, &ms, i, true, limit)
}

/// `Hⁱ(C, M)` on the category as given.
pub fn category_cohomology_full(
    c: &FinCat,
    m: &AbPresheaf,
    i: usize,
    normalized: bool,
    limit: impl Into<Limits>,
) -> Result<AbGroup> {
    Ok(bar_complex(c, m, i + 1, normalized, limit)?.cohomology(i).group)
}

/// The cochain map `Cⁿ(C, N) → Cⁿ(D, M)` of a functor `F: D → C` and a
/// transformation `φ: N∘F → M`: `(Fφ)(σ) = φ_{x₀}(φ(Fσ))`.
///
/// Chains whose image is degenerate contribute nothing when `src` is
/// normalized.
pub fn pullback_cochains(
    src_cat: &FinCat,
    functor: &crate::fincat::FinFunctor,
    src: &BarComplex,
    tgt: &BarComplex,
    components: &[Matrix],
    n: usize,
) -> Matrix {
    let mut out = Matrix::zeros(tgt.complex.groups[n].ngens(), src.complex.groups[n].ngens());
    for (t, sigma) in tgt.chains[n].iter().enumerate() {
        let image: Vec<usize> = sigma.morphisms.iter().map(|&f| functor.mor(f)).collect();
        if src.normalized && image.iter().any(|&f| src_cat.is_identity(f)) {
            continue;
        }
        let start = functor.obj(sigma.start);
        let s = src.chain_position(n, &image, start).expect("functor image of a chain is a chain");
        out.put_block(tgt.offsets[n][t], src.offsets[n][s], &components[sigma.start]);
    }
    out
}
