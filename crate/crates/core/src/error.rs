use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("unrecognised group descriptor: {0}")]
    BadDescriptor(String),
    #[error("group order exceeds guard ({limit})")]
    OrderGuardExceeded { limit: usize },
    #[error("permutation degree {degree} exceeds guard ({limit})")]
    DegreeGuardExceeded { degree: usize, limit: usize },
    #[error("second subgroup is not contained in the first")]
    NotASubgroupPair,
    #[error("empty object set")]
    EmptyObjectSet,
    #[error("the requested category has no objects")]
    EmptyCategory,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("chain count exceeds guard ({limit})")]
    ChainCountGuardExceeded { limit: u64 },
    #[error("morphisms do not share a codomain")]
    MixedCodomain,
    #[error("morphism codomain differs from the sieve apex")]
    ApexMismatch,
    #[error("homomorphism is not well defined")]
    IllDefinedMap,
    #[error("resolution rank exceeds guard ({limit})")]
    RankGuardExceeded { limit: usize },
    #[error("matrix dimension exceeds guard ({limit})")]
    MatrixGuardExceeded { limit: usize },
    #[error("enumeration size exceeds guard ({limit})")]
    EnumerationGuardExceeded { limit: u64 },
    #[error("presheaf is not invertible: {0}")]
    NotInvertible(String),
    #[error("presheaf is not a sheaf: {0}")]
    NotASheaf(String),
    #[error("character is not well defined on the orbit category: {0}")]
    WellDefinednessFailure(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Guard violations as opposed to malformed input or failed checks.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::OrderGuardExceeded { .. }
                | Error::DegreeGuardExceeded { .. }
                | Error::ChainCountGuardExceeded { .. }
                | Error::RankGuardExceeded { .. }
                | Error::MatrixGuardExceeded { .. }
                | Error::EnumerationGuardExceeded { .. }
                | Error::EmptyCategory
        )
    }
}
