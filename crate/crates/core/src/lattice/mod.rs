//! Exact integer lattice algebra: Smith normal form, cokernels, coinvariants,
//! torsion and finite abelian groups.

mod abelian;
mod matrix;
pub mod rational;
mod smith;

pub use abelian::{
    coinvariants, cokernel, torsion_part, Cokernel, FiniteAbelianGroup, GroupElement, Subgroup,
    DEFAULT_SUBGROUP_BOUND,
};
pub use matrix::IntMatrix;
pub use rational::{lattice_membership, Rational, RationalVector};
pub use smith::{smith_normal_form, SmithDecomposition};
