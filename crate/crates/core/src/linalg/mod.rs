//! Exact integer linear algebra.

mod complex;
mod group;
mod lattice;
mod matrix;
mod scalar;
mod snf;

pub use complex::{complex_cohomology, induced_map, CochainComplexZ, Cohomology};
pub use group::{AbGroup, AbMap, Decomposition, KerImCoker, Presentation, QuotientGroup, Subquotient};
pub use lattice::Lattice;
pub use matrix::{Integer, Matrix};
pub use snf::{hermite_rows, integer_kernel, invariant_factors, kernel_mod, smith_normal_form, solve_integer, Snf};
