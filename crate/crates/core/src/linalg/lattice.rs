use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::Zero;

use super::matrix::{Integer, Matrix};
use super::snf::hermite_rows;

/// A sublattice of `Zⁿ` held by its Hermite basis (rows in echelon form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(ambient: usize, gens: &[Vec<Integer>]) -> Self {
        let basis = if gens.is_empty() {
            Matrix::zeros(0, ambient)
        } else {
            hermite_rows(&Matrix::from_rows(gens.to_vec(), ambient))
        };
        let pivots = (0..basis.rows())
            .map(|i| (0..ambient).find(|&j| !basis.get(i, j).is_zero()).expect("hermite rows are nonzero"))
            .collect();
        Lattice { ambient, basis, pivots }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_generators(ambient, &Matrix::identity(ambient).row_vecs())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Basis vectors, in Hermite order.
    pub fn basis(&self) -> Vec<Vec<Integer>> {
        self.basis.row_vecs()
    }

    /// `ambient × rank` matrix whose columns are the basis vectors.
    pub fn basis_columns(&self) -> Matrix {
        self.basis.transpose()
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[Integer]) -> Option<Vec<Integer>> {
        assert_eq!(v.len(), self.ambient);
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.rank());
        for (i, &p) in self.pivots.iter().enumerate() {
            let (q, r) = rest[p].div_rem(self.basis.get(i, p));
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (j, x) in rest.iter_mut().enumerate() {
                    let b = self.basis.get(i, j);
                    if !b.is_zero() {
                        *x -= b * &q;
                    }
                }
            }
            out.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(out)
    }

    pub fn contains(&self, v: &[Integer]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.row_vecs().iter().all(|b| self.contains(b))
    }
}
