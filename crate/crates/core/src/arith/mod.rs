//! Exact scalar, polynomial, and rational-function arithmetic over ℚ and ℚ(i).

mod degree;
mod modular;
mod poly;
mod ratfunc;
mod scalar;

pub use degree::GradedDegree;
pub use poly::Poly;
pub use ratfunc::{m_apply, rat_add, rat_degree, rat_mul, RatFunc};
pub use scalar::{Field, Scalar};

/// Degree of a polynomial in the grading, `−∞` for zero.
pub fn poly_degree(p: &Poly) -> GradedDegree {
    p.degree()
}
