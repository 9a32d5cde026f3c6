//! Exact decision procedures for the dynamics of row-finite operators on the
//! sequence space `ω = 𝕂^ℕ`.
//!
//! An operator `T` on `ω` is mixing exactly when its dual `T′`, acting on
//! finitely supported functionals, has no non-trivial finite-dimensional
//! invariant subspace. This crate searches for such subspaces with exact
//! arithmetic over ℚ or ℚ(i) and returns re-verifiable certificates: torsion
//! functionals for non-transitive operators, cap-bounded no-torsion reports
//! for mixing ones, degree bounds `m(L)` beyond which `p(T′)(L) ∩ L = {0}`,
//! and explicit orbit witnesses `u` with `p(T)u` landing in a prescribed
//! affine cylinder.

pub mod arith;
pub mod bounds;
pub mod certificate;
pub mod error;
pub mod guard;
pub mod linalg;
pub mod operators;
pub mod relations;
pub mod structure;
pub mod witness;

pub use arith::{Field, GradedDegree, Poly, RatFunc, Scalar};
pub use error::{ArithError, Error, ParseError, Result};
pub use operators::{FinSuppVec, Operator, OperatorDoc};
