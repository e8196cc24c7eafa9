//! Brute-force ground truth from actual Hermitian lattices over the
//! unramified quadratic extension of `Q_p`.

pub mod count;
pub mod lattice;
pub mod local;
pub mod matrix;

pub use lattice::HermitianLattice;
pub use local::{LocalElem, LocalRing};
