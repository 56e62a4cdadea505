//! Based root data: construction for every Cartan type and isogeny class,
//! validation, highest coroot, Coxeter number, `X/Q` and diagram automorphisms.

mod automorphism;
mod cartan;
mod datum;

pub use automorphism::{diagram_automorphism, DatumAutomorphism};
pub use cartan::{CartanType, Isogeny, Series};
pub use datum::{
    build_datum, pair, BasedRootDatum, DatumJson, HighestCoroot, IntVector, Violation,
};
