//! Exact computations in the principal subspaces of the level-one
//! `A_1^(1)`-modules `L(Λ0)` and `L(Λ1)`.
//!
//! The polynomial algebra on the commuting generators `x(m)` is evaluated on
//! the highest weight vectors inside a lattice Fock space, and the kernels of
//! these evaluations are compared, one bigraded piece at a time, with the
//! ideals generated by the quadratic relations `R_t`.

pub mod fock;
pub mod linalg;
pub mod poly;
pub mod relations;
pub mod scalar;
pub mod verify;

pub use fock::{FockState, FockVector};
pub use linalg::SparseMatQ;
pub use poly::{BigradedIndex, Monomial, PolyQ};
pub use relations::{build_r, ideal_piece, IdealSpec, RelationFamily};
pub use verify::{ModuleTag, PieceReport, VerificationRun};
pub use scalar::Rational;
