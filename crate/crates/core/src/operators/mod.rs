//! Row-finite operators on `ω`, their duals on `φ = ω′`, and pairings.

mod doc;
mod finsupp;
mod operator;

pub use doc::{parse_operator, BandDiagonal, EventuallyPeriodicSeq, Expr, OperatorDoc};
pub use finsupp::{pairing, FinSuppVec};
pub use operator::{dual_apply, poly_dual_apply, row, Operator};
