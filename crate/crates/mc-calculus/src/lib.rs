//! Exact calculus for nilpotent differential graded Lie algebras over the
//! rationals.
//!
//! The crate provides, with no floating point anywhere:
//!
//! * graded vector spaces, exact Gaussian elimination and cochain cohomology
//!   ([`linear`]);
//! * finite-dimensional nilpotent dg Lie algebras with their lower central
//!   series, Maurer-Cartan elements, twisting, the Baker-Campbell-Hausdorff
//!   product, the gauge action and a constructive gauge-lifting procedure
//!   ([`dgla`], [`lie`]);
//! * polynomial differential forms on simplices with faces, degeneracies,
//!   exact integration, an extension operator and a contraction homotopy
//!   ([`forms`]);
//! * Lie-algebra valued forms, the simplicial Maurer-Cartan space, the
//!   exponential and gauge groups, and constructive Kan horn filling
//!   ([`simplicial`]);
//! * normalized chains, the shuffle Lie bracket and the simplex integration
//!   map ([`dold_kan`]);
//! * homotopy groups of the Maurer-Cartan space with Samelson/Whitehead
//!   products and the connecting-map identity ([`homotopy`]).
//!
//! Sign conventions are fixed once, crate-wide; see the README for the list.

pub mod corpus;
pub mod dgla;
pub mod dold_kan;
pub mod forms;
pub mod homotopy;
pub mod lie;
pub mod linear;
pub mod scalar;
pub mod selftest;
pub mod simplicial;

pub use scalar::Scalar;
