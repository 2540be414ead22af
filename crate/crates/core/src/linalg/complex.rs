//! Cochain complexes of finitely generated abelian groups.

use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::Zero;

use super::group::{AbGroup, AbMap, Subquotient};
use super::matrix::{Integer, Matrix};
use super::snf::kernel_mod;

/// `C⁰ → C¹ → … → Cⁿ`; `differentials[i]: Cⁱ → Cⁱ⁺¹`.
#[derive(Clone, Debug)]
pub struct CochainComplexZ {
    pub groups: Vec<AbGroup>,
    pub differentials: Vec<AbMap>,
}

/// `Hⁱ` with its cocycle/class coordinate maps.
pub type Cohomology = Subquotient;

impl CochainComplexZ {
    pub fn new(groups: Vec<AbGroup>, differentials: Vec<AbMap>) -> Self {
        assert_eq!(groups.len(), differentials.len() + 1, "one differential per consecutive pair");
        for (i, d) in differentials.iter().enumerate() {
            assert_eq!(d.source, groups[i]);
            assert_eq!(d.target, groups[i + 1]);
        }
        CochainComplexZ { groups, differentials }
    }

    pub fn top_degree(&self) -> usize {
        self.groups.len() - 1
    }

    /// Every differential is well defined and consecutive composites vanish.
    pub fn is_complex(&self) -> bool {
        self.differentials.iter().all(AbMap::is_well_defined)
            && self.differentials.windows(2).all(|w| w[1].after(&w[0]).is_zero())
    }

    /// `Hⁱ = ker dᵢ / im dᵢ₋₁`. At the top degree `dᵢ` is taken to be zero.
    pub fn cohomology(&self, i: usize) -> Cohomology {
        let ci = &self.groups[i];
        let cocycles = match self.differentials.get(i) {
            Some(d) => kernel_mod(&d.matrix, d.target.moduli()),
            None => Matrix::identity(ci.ngens()).columns(),
        };
        let bounds = if i > 0 { self.differentials[i - 1].matrix.columns() } else { Vec::new() };
        Subquotient::new(ci, &cocycles, &bounds)
    }
}

/// `Hⁱ` of the complex, as a chain-form group.
pub fn complex_cohomology(x: &CochainComplexZ, i: usize) -> AbGroup {
    x.cohomology(i).group
}

/// The map `H(f): H_src → H_tgt` induced by a cochain map given in degree `i`
/// by `chain_map` (`tgt.ambient.ngens() × src.ambient.ngens()`).
pub fn induced_map(src: &Cohomology, tgt: &Cohomology, chain_map: &Matrix) -> AbMap {
    let cols: Vec<Vec<Integer>> = src
        .representatives()
        .iter()
        .map(|z| {
            let image = chain_map.mul_vec(z);
            tgt.class_of(&image).expect("chain maps send cocycles to cocycles")
        })
        .collect();
    let m = if cols.is_empty() {
        Matrix::zeros(tgt.group.ngens(), 0)
    } else {
        Matrix::from_columns(tgt.group.ngens(), &cols)
    };
    let mut m = m;
    for r in 0..m.rows() {
        let md = tgt.group.moduli()[r].clone();
        if !md.is_zero() {
            for c in 0..m.cols() {
                let x = m.get(r, c).mod_floor(&md);
                m.set(r, c, x);
            }
        }
    }
    AbMap::new(src.group.clone(), tgt.group.clone(), m)
}
