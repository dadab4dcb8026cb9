//! Singular orbit data of finite group actions on surfaces, the induced
//! equivariant signature, and the lattice indices attached to them.
//!
//! Everything is exact: groups are multiplication tables, lattices use
//! arbitrary-precision integers, and character values live in cyclotomic
//! fields with rational coefficients.

pub mod class_number;
pub mod error;
pub mod group;
pub mod lattice;
pub mod orbit;
pub mod rep;
pub mod signature;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
