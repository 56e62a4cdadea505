//! Root data, Yu's folding, the alcove stabilizer group and the R-group
//! classification for unramified parameters, all over exact arithmetic.

pub mod error;
pub mod lattice;
pub mod rootdata;
pub mod restriction;
pub mod rgroup;
pub mod weyl;

pub use error::{Error, Result};
