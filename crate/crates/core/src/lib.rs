//! Exact-arithmetic polyhedral geometry for numerical semigroups: group
//! cones of finite abelian groups, Kunz polyhedra, oversemigroup cones, the
//! posets attached to their faces, and the leading coefficients of the
//! lattice-point counting quasipolynomials.
//!
//! The crate is `no_std` (it only needs `alloc`); everything is computed
//! over arbitrary-precision integers and rationals with deterministic
//! enumeration orders.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod abelian;
pub mod bitset;
pub mod cone;
pub mod ehrhart;
pub mod error;
pub mod groupcone;
pub mod kunzpoly;
pub mod linalg;
pub mod numsgp;
pub mod overcone;
pub mod poset;

pub use error::{Error, Result};
