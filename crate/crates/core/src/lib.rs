//! Combinatorial species, the symmetric Fock spaces they generate, and
//! weighted creation and annihilation operators on truncated, finitely
//! colored versions of those spaces.

pub mod combinat;
pub mod dsl;
pub mod error;
pub mod fock;
pub mod operators;
pub mod pairpart;
pub mod perm;
pub mod relations;
pub mod species;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
