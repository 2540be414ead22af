//! Finitely generated abelian groups and homomorphisms between them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer as _;
use num_traits::{One, Zero};

use super::lattice::Lattice;
use super::matrix::{Integer, Matrix};
use super::snf::{diagonalize, kernel_mod, Track};

/// `Z/m₁ ⊕ … ⊕ Z/m_k`, each modulus `≥ 0` (zero meaning a free factor).
///
/// The generator moduli need not form a divisibility chain; isomorphism type
/// is compared through [`AbGroup::invariant_factors`]. Groups produced by
/// [`Presentation::decompose`] are always in chain form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbGroup {
    moduli: Vec<Integer>,
}

impl AbGroup {
    pub fn trivial() -> Self {
        AbGroup { moduli: Vec::new() }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            AbGroup { moduli: vec![Integer::from(n)] }
        }
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { moduli: vec![Integer::zero(); rank] }
    }

    pub fn from_moduli(moduli: Vec<Integer>) -> Self {
        AbGroup { moduli }
    }

    pub fn direct_sum<'a>(parts: impl IntoIterator<Item = &'a AbGroup>) -> Self {
        AbGroup { moduli: parts.into_iter().flat_map(|g| g.moduli.iter().cloned()).collect() }
    }

    pub fn moduli(&self) -> &[Integer] {
        &self.moduli
    }

    /// Number of generators of this presentation.
    pub fn ngens(&self) -> usize {
        self.moduli.len()
    }

    /// Invariant factors `d₁ | d₂ | … ` (all `> 1`) followed by one `0` per
    /// free summand.
    pub fn invariant_factors(&self) -> Vec<Integer> {
        let mut torsion: Vec<Integer> = self.moduli.iter().filter(|m| !m.is_zero() && !m.is_one()).cloned().collect();
        let free = self.moduli.iter().filter(|m| m.is_zero()).count();
        // normalise a diagonal presentation by repeated gcd/lcm exchange
        let k = torsion.len();
        for i in 0..k {
            for j in i + 1..k {
                let g = torsion[i].gcd(&torsion[j]);
                let l = torsion[i].lcm(&torsion[j]);
                torsion[i] = g;
                torsion[j] = l;
            }
        }
        let mut out: Vec<Integer> = torsion.into_iter().filter(|d| !d.is_one()).collect();
        out.extend(std::iter::repeat_n(Integer::zero(), free));
        out
    }

    pub fn is_isomorphic(&self, other: &AbGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    /// `Some(|A|)` for finite groups.
    pub fn order(&self) -> Option<Integer> {
        let mut acc = Integer::one();
        for m in &self.moduli {
            if m.is_zero() {
                return None;
            }
            acc *= m;
        }
        Some(acc)
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().all(One::is_one)
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|m| m.is_zero()).count()
    }

    /// Reduces each coordinate into `[0, mᵢ)` for nonzero moduli.
    pub fn reduce(&self, v: &mut [Integer]) {
        assert_eq!(v.len(), self.moduli.len());
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
    }

    pub fn reduced(&self, mut v: Vec<Integer>) -> Vec<Integer> {
        self.reduce(&mut v);
        v
    }

    pub fn is_zero_element(&self, v: &[Integer]) -> bool {
        v.iter().zip(&self.moduli).all(|(x, m)| if m.is_zero() { x.is_zero() } else { x.is_multiple_of(m) })
    }

    /// All elements of a finite group, in odometer order.
    ///
    /// # Panics
    /// If the group is infinite.
    pub fn elements(&self) -> Vec<Vec<Integer>> {
        let bounds: Vec<u64> = self
            .moduli
            .iter()
            .map(|m| {
                assert!(!m.is_zero(), "cannot enumerate an infinite group");
                u64::try_from(m).expect("modulus fits in u64")
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0u64; bounds.len()];
        loop {
            out.push(cur.iter().map(|&x| Integer::from(x)).collect());
            let mut i = 0;
            loop {
                if i == bounds.len() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Relation vectors `mᵢ·eᵢ` for the nonzero moduli.
    pub fn relation_vectors(&self) -> Vec<Vec<Integer>> {
        let n = self.ngens();
        self.moduli
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| {
                let mut v = vec![Integer::zero(); n];
                v[i] = m.clone();
                v
            })
            .collect()
    }
}

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = self.invariant_factors();
        if inv.is_empty() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        for d in inv {
            if d.is_zero() {
                parts.push(String::from("Z"));
            } else {
                parts.push(alloc::format!("Z/{d}"));
            }
        }
        f.write_str(&parts.join(" + "))
    }
}

/// `Zⁿ / ⟨relations⟩` with relations as rows.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub gens: usize,
    pub relations: Matrix,
}

/// A chain-form group together with mutually inverse coordinate changes.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub group: AbGroup,
    /// `group.ngens() × gens`: presentation coordinates to group coordinates.
    pub to_group: Matrix,
    /// `gens × group.ngens()`: group generator lifts.
    pub from_group: Matrix,
}

impl Presentation {
    pub fn new(gens: usize, relations: Vec<Vec<Integer>>) -> Self {
        let relations = if relations.is_empty() { Matrix::zeros(0, gens) } else { Matrix::from_rows(relations, gens) };
        Presentation { gens, relations }
    }

    pub fn decompose(&self) -> Decomposition {
        let n = self.gens;
        let dg = diagonalize(&self.relations, Track { v: true, vinv: true, chain: true, ..Track::default() });
        let v = dg.v.unwrap();
        let vinv = dg.vinv.unwrap();
        let mut keep = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..n {
            let d = if i < dg.diag.len() { dg.diag[i].clone() } else { Integer::zero() };
            if !d.is_one() {
                keep.push(i);
                moduli.push(d);
            }
        }
        let group = AbGroup { moduli };
        // relations are rows, so `x ↦ Vᵀx` diagonalizes them
        let mut to_group = v.select_columns(&keep).transpose();
        // keep coordinate changes small
        for i in 0..to_group.rows() {
            let m = group.moduli[i].clone();
            if !m.is_zero() {
                for j in 0..to_group.cols() {
                    let x = to_group.get(i, j).mod_floor(&m);
                    to_group.set(i, j, x);
                }
            }
        }
        Decomposition { group, to_group, from_group: vinv.select_rows(&keep).transpose() }
    }
}

/// Homomorphism between two diagonal groups, acting on generator coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbMap {
    pub source: AbGroup,
    pub target: AbGroup,
    /// `target.ngens() × source.ngens()`
    pub matrix: Matrix,
}

/// `(N + R) / (D + R)` inside a diagonal group, where `R` are the ambient
/// relations, with coordinate maps between ambient vectors and classes.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: AbGroup,
    pub ambient: AbGroup,
    lattice: Lattice,
    to_group: Matrix,
    from_group: Matrix,
}

impl Subquotient {
    /// # Panics
    /// If some denominator does not lie in the numerator lattice.
    pub fn new(ambient: &AbGroup, numerators: &[Vec<Integer>], denominators: &[Vec<Integer>]) -> Self {
        let n = ambient.ngens();
        let rel = ambient.relation_vectors();
        let mut gens = numerators.to_vec();
        gens.extend(rel.iter().cloned());
        let lattice = Lattice::from_generators(n, &gens);
        let rels: Vec<Vec<Integer>> = denominators
            .iter()
            .chain(rel.iter())
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .map(|v| lattice.coords(v).expect("denominator outside numerator"))
            .collect();
        let dec = Presentation::new(lattice.rank(), rels).decompose();
        Subquotient {
            group: dec.group,
            ambient: ambient.clone(),
            lattice,
            to_group: dec.to_group,
            from_group: dec.from_group,
        }
    }

    /// Class of an ambient vector, or `None` if it lies outside the numerator.
    pub fn class_of(&self, v: &[Integer]) -> Option<Vec<Integer>> {
        let c = self.lattice.coords(v)?;
        Some(self.group.reduced(self.to_group.mul_vec(&c)))
    }

    pub fn contains(&self, v: &[Integer]) -> bool {
        self.lattice.contains(v)
    }

    /// `ambient.ngens() × group.ngens()`: ambient vectors of the generators.
    pub fn inclusion_matrix(&self) -> Matrix {
        let mut m = self.lattice.basis_columns().mul(&self.from_group);
        for i in 0..m.rows() {
            let md = self.ambient.moduli()[i].clone();
            if !md.is_zero() {
                for j in 0..m.cols() {
                    let x = m.get(i, j).mod_floor(&md);
                    m.set(i, j, x);
                }
            }
        }
        m
    }

    pub fn representative(&self, j: usize) -> Vec<Integer> {
        self.inclusion_matrix().column(j)
    }

    pub fn representatives(&self) -> Vec<Vec<Integer>> {
        self.inclusion_matrix().columns()
    }

    /// The inclusion, meaningful when there are no extra denominators.
    pub fn inclusion(&self) -> AbMap {
        AbMap::new(self.group.clone(), self.ambient.clone(), self.inclusion_matrix())
    }

    /// Matrix of a map into this subquotient, given ambient images of the
    /// source generators.
    ///
    /// # Panics
    /// If some image lies outside the numerator.
    pub fn map_from(&self, source: &AbGroup, images: &[Vec<Integer>]) -> AbMap {
        let cols: Vec<Vec<Integer>> =
            images.iter().map(|v| self.class_of(v).expect("image outside the subquotient")).collect();
        AbMap::new(source.clone(), self.group.clone(), Matrix::from_columns(self.group.ngens(), &cols))
    }
}

/// A cokernel together with its projection.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: AbGroup,
    pub projection: AbMap,
}

#[derive(Clone, Debug)]
pub struct KerImCoker {
    pub kernel: Subquotient,
    pub image: Subquotient,
    pub cokernel: QuotientGroup,
}

impl AbMap {
    pub fn new(source: AbGroup, target: AbGroup, matrix: Matrix) -> Self {
        assert_eq!(matrix.rows(), target.ngens(), "map rows must match target");
        assert_eq!(matrix.cols(), source.ngens(), "map columns must match source");
        AbMap { source, target, matrix }
    }

    pub fn identity(g: &AbGroup) -> Self {
        AbMap::new(g.clone(), g.clone(), Matrix::identity(g.ngens()))
    }

    pub fn zero(source: &AbGroup, target: &AbGroup) -> Self {
        AbMap::new(source.clone(), target.clone(), Matrix::zeros(target.ngens(), source.ngens()))
    }

    /// Every relation of the source maps into the target's relations.
    pub fn is_well_defined(&self) -> bool {
        self.source.relation_vectors().iter().all(|r| self.target.is_zero_element(&self.matrix.mul_vec(r)))
    }

    pub fn apply(&self, v: &[Integer]) -> Vec<Integer> {
        self.target.reduced(self.matrix.mul_vec(v))
    }

    /// `self ∘ first`
    pub fn after(&self, first: &AbMap) -> AbMap {
        AbMap::new(first.source.clone(), self.target.clone(), self.reduce_matrix(self.matrix.mul(&first.matrix)))
    }

    /// Entries reduced modulo the target's moduli.
    pub fn reduced(self) -> AbMap {
        let matrix = self.reduce_matrix(self.matrix.clone());
        AbMap { matrix, ..self }
    }

    fn reduce_matrix(&self, mut m: Matrix) -> Matrix {
        for i in 0..m.rows() {
            let md = &self.target.moduli[i];
            if !md.is_zero() {
                for j in 0..m.cols() {
                    let x = m.get(i, j).mod_floor(md);
                    m.set(i, j, x);
                }
            }
        }
        m
    }

    /// The map equals zero as a homomorphism.
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    /// Two maps with the same source and target agree as homomorphisms.
    pub fn agrees_with(&self, other: &AbMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.matrix.cols()).all(|j| {
                let mut d = self.matrix.column(j);
                for (x, y) in d.iter_mut().zip(other.matrix.column(j)) {
                    *x -= y;
                }
                self.target.is_zero_element(&d)
            })
    }

    pub fn kernel(&self) -> Subquotient {
        let gens = kernel_mod(&self.matrix, self.target.moduli());
        Subquotient::new(&self.source, &gens, &[])
    }

    pub fn image(&self) -> Subquotient {
        Subquotient::new(&self.target, &self.matrix.columns(), &[])
    }

    pub fn cokernel(&self) -> QuotientGroup {
        let m = self.target.ngens();
        let mut rels = self.matrix.columns();
        rels.extend(self.target.relation_vectors());
        let dec = Presentation::new(m, rels).decompose();
        QuotientGroup { projection: AbMap::new(self.target.clone(), dec.group.clone(), dec.to_group), group: dec.group }
    }

    pub fn ker_im_coker(&self) -> KerImCoker {
        KerImCoker { kernel: self.kernel(), image: self.image(), cokernel: self.cokernel() }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}
