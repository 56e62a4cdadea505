//! Weyl groups, the extended affine Weyl group and the alcove stabilizer.

pub mod affine;
pub mod alcove;
pub mod group;
pub mod omega;

pub use affine::{AffineMap, AffineMapJson};
pub use alcove::{point_from_simple_values, Alcove, Wall, REDUCTION_STEP_CAP};
pub use group::{generate_weyl, regular_dominant, walk_weyl, weyl_order, WeylElement, DEFAULT_WEYL_CAP};
pub use omega::{omega_by_barycenter, omega_by_cosets, OmegaGroup, OmegaJson};
