//! Finite-group computation toolkit: Cayley-table groups, group words and
//! varieties, wreath-product constructions, homomorphism search, and
//! certified sandwich bounds for dominions in product varieties.

pub mod bounds;
pub mod catalog;
pub mod construct;
pub mod error;
pub mod group;
pub mod hom;
pub mod homsearch;
pub mod io;
pub mod limits;
pub mod named;
pub mod words;

pub use error::{Error, Result};
pub use group::{FiniteGroup, Subgroup};
pub use hom::Homomorphism;
pub use limits::Limits;
pub use words::{VarietyPresentation, Word};
