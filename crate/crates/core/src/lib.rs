//! Exact calculus of spherical functions on p-adic Hermitian lattices:
//! straightening, Hecke operators, the distinguished basis, and a brute-force
//! lattice oracle that checks the counting formulas at numeric `q`.

pub mod error;
pub mod expr;
pub mod hecke;
pub mod oracle;
pub mod phi;
pub mod rz;
pub mod satake;
pub mod scalar;
pub mod straighten;
pub mod typ;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{c_poly, gauss_binom, pochhammer, ExactScalar};
pub use expr::{parse_expr, render};
pub use typ::{Region, SphericalElement, TypeVector};
pub use straighten::{straighten, StrKind, Straightener};
