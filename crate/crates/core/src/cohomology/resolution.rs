//! Resolutions by representable presheaves and Ext over the category algebra.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::fincat::FinCat;
use crate::linalg::{integer_kernel, AbGroup, AbMap, CochainComplexZ, Integer, Lattice, Matrix};
use crate::presheaf::AbPresheaf;
use crate::{Error, Result};

/// `⊕ⱼ Z Hom(−, xⱼ)`; the basis of the value at `y` is the pairs `(j, h)`
/// with `h: y → xⱼ`, generator-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeTerm {
    pub generators: Vec<usize>,
    pub basis: Vec<Vec<(usize, usize)>>,
    index: Vec<BTreeMap<(usize, usize), usize>>,
}

impl FreeTerm {
    pub fn new(c: &FinCat, generators: Vec<usize>) -> Self {
        let basis: Vec<Vec<(usize, usize)>> = (0..c.object_count())
            .map(|y| {
                generators.iter().enumerate().flat_map(|(j, &x)| c.hom(y, x).into_iter().map(move |h| (j, h))).collect()
            })
            .collect();
        let index = basis.iter().map(|b| b.iter().enumerate().map(|(i, &p)| (p, i)).collect()).collect();
        FreeTerm { generators, basis, index }
    }

    pub fn rank(&self, y: usize) -> usize {
        self.basis[y].len()
    }

    pub fn position(&self, y: usize, j: usize, h: usize) -> usize {
        self.index[y][&(j, h)]
    }

    /// `P(v): P(cod v) → P(dom v)`, `(j, h) ↦ (j, h∘v)`.
    pub fn map(&self, c: &FinCat, v: usize) -> Matrix {
        let (y2, y) = (c.dom(v), c.cod(v));
        let mut m = Matrix::zeros(self.rank(y2), self.rank(y));
        for (col, &(j, h)) in self.basis[y].iter().enumerate() {
            m.set(self.position(y2, j, c.compose(h, v)), col, Integer::from(1));
        }
        m
    }

    pub fn presheaf(&self, c: &FinCat) -> AbPresheaf {
        AbPresheaf {
            values: (0..c.object_count()).map(|y| AbGroup::free(self.rank(y))).collect(),
            maps: (0..c.morphism_count()).map(|v| self.map(c, v)).collect(),
        }
    }

    /// The value at `y` of the map to a presheaf `A` sending generator `j`
    /// to `images[j] ∈ A(xⱼ)`.
    pub fn evaluate(&self, a_maps: &[Matrix], a_rank: usize, images: &[Vec<Integer>], y: usize) -> Matrix {
        let cols: Vec<Vec<Integer>> = self.basis[y].iter().map(|&(j, h)| a_maps[h].mul_vec(&images[j])).collect();
        if cols.is_empty() {
            Matrix::zeros(a_rank, 0)
        } else {
            Matrix::from_columns(a_rank, &cols)
        }
    }
}

/// `… → P₁ → P₀ → F → 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub terms: Vec<FreeTerm>,
    /// `images[i][j]`: image of generator `j` of `Pᵢ` in `Pᵢ₋₁(xⱼ)`
    /// (in `F(xⱼ)` for `i = 0`).
    pub images: Vec<Vec<Vec<Integer>>>,
    /// `differentials[i][y]: Pᵢ(y) → Pᵢ₋₁(y)` (to `F(y)` for `i = 0`).
    pub differentials: Vec<Vec<Matrix>>,
}

impl Resolution {
    /// Objects carrying generators at stage `i`.
    pub fn support(&self, i: usize) -> Vec<usize> {
        let mut s = self.terms[i].generators.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.generators.len()).collect()
    }

    /// Surjective onto `F` and exact at every stage and object.
    pub fn is_exact(&self, c: &FinCat, f: &AbPresheaf) -> bool {
        (0..c.object_count()).all(|y| {
            let eps = &self.differentials[0][y];
            let full = Lattice::full(f.values[y].ngens());
            let img = Lattice::from_generators(f.values[y].ngens(), &eps.columns());
            if img != full {
                return false;
            }
            (1..self.terms.len()).all(|i| {
                let n = self.terms[i - 1].rank(y);
                let ker = Lattice::from_generators(n, &integer_kernel(&self.differentials[i - 1][y]));
                let im = Lattice::from_generators(n, &self.differentials[i][y].columns());
                ker == im
            })
        })
    }
}

/// Generators covering the sublattices `L_y ⊆ A(y)`, objects processed in
/// decreasing index order. At each object generators are added one at a
/// time, each a basis vector of `L_y` outside the span so far, and the span
/// grows by its images under `End(y)`.
fn cover(
    c: &FinCat,
    a_maps: &[Matrix],
    lattices: &[Lattice],
    max_rank: usize,
) -> Result<(FreeTerm, Vec<Vec<Integer>>)> {
    let mut gens: Vec<usize> = Vec::new();
    let mut images: Vec<Vec<Integer>> = Vec::new();
    for y in (0..c.object_count()).rev() {
        let l = &lattices[y];
        if l.rank() == 0 {
            continue;
        }
        let mut coords: Vec<Vec<Integer>> = Vec::new();
        for (j, &x) in gens.iter().enumerate() {
            for h in c.hom(y, x) {
                let v = a_maps[h].mul_vec(&images[j]);
                if v.iter().any(|e| !e.is_zero()) {
                    coords.push(l.coords(&v).expect("images stay in the target"));
                }
            }
        }
        let basis = l.basis();
        let ends = c.hom(y, y);
        let r = l.rank();
        let mut span = Lattice::from_generators(r, &coords);
        for k in 0..r {
            if span.contains(&unit(r, k)) {
                continue;
            }
            let g = basis[k].clone();
            let mut rows = span.basis();
            for &e in &ends {
                let v = a_maps[e].mul_vec(&g);
                rows.push(l.coords(&v).expect("images stay in the target"));
            }
            span = Lattice::from_generators(r, &rows);
            gens.push(y);
            images.push(g);
        }
    }
    let term = FreeTerm::new(c, gens);
    if (0..c.object_count()).any(|y| term.rank(y) > max_rank) {
        return Err(Error::RankGuardExceeded { limit: max_rank });
    }
    Ok((term, images))
}

fn unit(n: usize, k: usize) -> Vec<Integer> {
    let mut v = alloc::vec![Integer::zero(); n];
    v[k] = Integer::from(1);
    v
}

/// A resolution `P_length → … → P₀ → F` of an objectwise free presheaf.
pub fn resolve_by_representables(c: &FinCat, f: &AbPresheaf, length: usize, max_rank: usize) -> Result<Resolution> {
    if !f.is_objectwise_free() {
        return Err(Error::Invalid("resolutions need objectwise free presheaves".into()));
    }
    let mut ranks: Vec<usize> = f.values.iter().map(AbGroup::ngens).collect();
    let mut a_maps: Vec<Matrix> = f.maps.clone();
    let mut lattices: Vec<Lattice> = ranks.iter().map(|&r| Lattice::full(r)).collect();
    let mut terms = Vec::new();
    let mut all_images = Vec::new();
    let mut differentials = Vec::new();
    for _ in 0..=length {
        let (term, images) = cover(c, &a_maps, &lattices, max_rank)?;
        let diffs: Vec<Matrix> = (0..c.object_count()).map(|y| term.evaluate(&a_maps, ranks[y], &images, y)).collect();
        lattices =
            (0..c.object_count()).map(|y| Lattice::from_generators(term.rank(y), &integer_kernel(&diffs[y]))).collect();
        ranks = (0..c.object_count()).map(|y| term.rank(y)).collect();
        a_maps = (0..c.morphism_count()).map(|v| term.map(c, v)).collect();
        terms.push(term);
        all_images.push(images);
        differentials.push(diffs);
    }
    Ok(Resolution { terms, images: all_images, differentials })
}

/// `Hom(P_•, M)` via Yoneda: `Hom(Z Hom(−, x), M) = M(x)`.
pub fn hom_complex(r: &Resolution, m: &AbPresheaf) -> CochainComplexZ {
    let groups: Vec<AbGroup> =
        r.terms.iter().map(|t| AbGroup::direct_sum(t.generators.iter().map(|&x| &m.values[x]))).collect();
    let offsets: Vec<Vec<usize>> = r
        .terms
        .iter()
        .map(|t| {
            let mut acc = 0;
            t.generators
                .iter()
                .map(|&x| {
                    let o = acc;
                    acc += m.values[x].ngens();
                    o
                })
                .collect()
        })
        .collect();
    let differentials = (0..r.terms.len().saturating_sub(1))
        .map(|i| {
            let (src, dst) = (&r.terms[i], &r.terms[i + 1]);
            let mut d = Matrix::zeros(groups[i + 1].ngens(), groups[i].ngens());
            for (k, &xk) in dst.generators.iter().enumerate() {
                let e = &r.images[i + 1][k];
                for (pos, &(j, h)) in src.basis[xk].iter().enumerate() {
                    let coef = &e[pos];
                    if coef.is_zero() {
                        continue;
                    }
                    d.add_block(offsets[i + 1][k], offsets[i][j], &m.maps[h], coef);
                }
            }
            let map = AbMap::new(groups[i].clone(), groups[i + 1].clone(), d);
            AbMap::identity(&groups[i + 1]).after(&map)
        })
        .collect();
    CochainComplexZ::new(groups, differentials)
}

/// `Extⁱ_{ZC}(F, M)` for `i ≤ i_max`.
pub fn ext_over_category(
    c: &FinCat,
    f: &AbPresheaf,
    m: &AbPresheaf,
    i_max: usize,
    max_rank: usize,
) -> Result<Vec<AbGroup>> {
    let r = resolve_by_representables(c, f, i_max + 1, max_rank)?;
    let x = hom_complex(&r, m);
    Ok((0..=i_max).map(|i| x.cohomology(i).group).collect())
}
