//! Exact-arithmetic tableaux over finite dimensional Lie algebras.
//!
//! The crate represents Lie algebras by rational structure constants,
//! verifies the three defining conditions of a tableau over a Lie algebra
//! (curvature, torsion, involutivity), computes first prolongations and
//! Cartan characters along certified generic flags, constructs Cartan
//! tableaux from symmetric decompositions of semisimple algebras, and emits
//! and analyzes the associated linear Pfaffian systems, including torsion
//! absorption, reduced characters, the involutivity cross-check, and the
//! rank-k compatibility PDE attached to a symmetric space.
//!
//! Everything except the optional grid-residual checker runs in exact
//! rational arithmetic: dimension counts and characters are integer claims
//! and are computed as such.

pub mod cartan;
pub mod catalog;
pub mod error;
pub mod gg0;
pub mod lie;
pub mod matrix;
pub mod pfaffian;
pub mod poly;
pub mod rat;
pub mod tableau;

pub use error::{Error, Result};
pub use lie::{LieAlgebra, Subspace};
pub use matrix::RatMatrix;
pub use poly::{Poly, PolyMatrix};
pub use rat::Rat;
