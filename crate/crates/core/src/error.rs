use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unimodular (determinant {det})")]
    NonUnimodular { det: String },
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: String, bound: usize },
    #[error("invalid rank {rank} for series {series}")]
    InvalidRank { series: String, rank: usize },
    #[error("root datum is not irreducible")]
    NotIrreducible,
    #[error("root datum is not semisimple")]
    NotSemisimple,
    #[error("root datum is not reduced")]
    NotReduced,
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("unrecognized Cartan matrix {0:?}")]
    Unrecognized(Vec<Vec<i64>>),
    #[error("enumeration cap {cap} exceeded after {count} elements")]
    CapExceeded { cap: usize, count: usize },
    #[error("point lies outside the closed alcove")]
    PointOutsideAlcove,
    #[error("alcove reduction did not terminate within {0} steps")]
    NonTermination(usize),
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
