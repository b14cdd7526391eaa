//! Modular Lie superalgebras of odd Hamiltonian (`HO`) and odd contact (`KO`)
//! type over prime fields of characteristic `p > 3`.
//!
//! The crate builds these algebras from divided power superalgebras,
//! computes their torus weight decompositions and the cohomology groups
//! `H²(X, F)` and `H¹(X, X*)`, and checks the structural statements used in
//! the classification of their Lie superalgebra structure.

pub mod cartan;
pub mod cohomology;
pub mod divided_power;
pub mod error;
pub mod field;
pub mod linalg;
pub mod parity;
pub mod verify;
pub mod weights;
pub mod witt;

pub use cartan::{build_algebra, CartanParams, Family, GradedAlgebra};
pub use divided_power::{Context, Monomial, Poly, Signature};
pub use error::{Error, Result};
pub use field::{Fp, PrimeField};
pub use linalg::{SparseMatrix, SparseVec, Subspace};
pub use parity::Parity;
pub use witt::WittElement;
