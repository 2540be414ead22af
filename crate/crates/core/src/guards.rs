/// Size limits applied by the constructions and enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub max_degree: usize,
    pub max_order: usize,
    pub max_chains: u64,
    pub max_enumeration: u64,
    pub max_matrix_dim: usize,
    /// Largest number of sieves per object for exhaustive sieve checks.
    pub max_sieves: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_degree: 64,
            max_order: 200,
            max_chains: 10_000_000,
            max_enumeration: 100_000_000,
            max_matrix_dim: 4000,
            max_sieves: 4096,
        }
    }
}
