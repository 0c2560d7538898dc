//! Group-theoretic matrix multiplication.
//!
//! Finite groups and their subsets, the triple product property and its
//! simultaneous version, matrix multiplication through group algebras,
//! irreducible degree sums, Strassen's scheme, and the exponent bounds that
//! follow from realized tensors.

pub mod algebra;
pub mod bounds;
pub mod chars;
pub mod error;
pub mod group;
pub mod matrix;
pub mod reproduce;
pub mod strassen;
pub mod tpp;

pub use error::{Error, Result};
pub use group::subset::Subset;
pub use group::{build_group, Element, Group, GroupSpec};
pub use matrix::{Matrix, Scalar};
