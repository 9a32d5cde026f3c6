//! Representations over a `T′`-independent family and the map `J` into
//! rational-function vectors.
//!
//! If `B = (b_1, …, b_r)` is `T′`-independent and `q(T′)x = Σ_a p_a(T′)b_a`
//! with `q ≠ 0`, then `J x = (p_a / q)_a` does not depend on the chosen
//! representation, is linear, and intertwines `T′` with multiplication by
//! `t`: `J(T′x) = M·J(x)`.

use serde::{Deserialize, Serialize};

use crate::arith::{Field, GradedDegree, Poly, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::guard::enter_search;
use crate::operators::{FinSuppVec, Operator};
use crate::relations::{self, krylov_relation, relation_to_representation, IndependenceReport, Syzygy};

/// `q(T′)x = Σ_a p[a](T′)·basis[a]`, with `q` monic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub x: FinSuppVec,
    pub basis: Vec<FinSuppVec>,
    pub q: Poly,
    pub p: Vec<Poly>,
}

impl Representation {
    pub fn check(&self, op: &Operator) -> Result<(), String> {
        if self.p.len() != self.basis.len() {
            return Err("numerator list and basis differ in length".into());
        }
        if !self.q.leading().is_some_and(Scalar::is_one) {
            return Err("denominator q is not monic".into());
        }
        let lhs = op.poly_dual_apply(&self.q, &self.x);
        let rhs = self
            .basis
            .iter()
            .zip(&self.p)
            .fold(FinSuppVec::zero(), |acc, (b, p)| acc.add(&op.poly_dual_apply(p, b)));
        if lhs != rhs {
            return Err(format!("q(T′)x = {lhs} but Σ p_a(T′)b_a = {rhs}"));
        }
        Ok(())
    }

    /// `(p_a / q)_a`.
    pub fn j_image(&self) -> RatFuncVec {
        RatFuncVec::new(
            self.p
                .iter()
                .map(|p| RatFunc::new(p.clone(), self.q.clone()).expect("q is nonzero"))
                .collect(),
        )
    }
}

/// A vector in `𝕂(t)^r`, aligned with a basis `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatFuncVec {
    entries: Vec<RatFunc>,
}

impl RatFuncVec {
    pub fn new(entries: Vec<RatFunc>) -> RatFuncVec {
        RatFuncVec { entries }
    }

    pub fn zero(field: Field, len: usize) -> RatFuncVec {
        RatFuncVec { entries: vec![RatFunc::zero(field); len] }
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RatFunc::is_zero)
    }

    pub fn add(&self, other: &RatFuncVec) -> RatFuncVec {
        assert_eq!(self.len(), other.len(), "length mismatch");
        RatFuncVec { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> RatFuncVec {
        RatFuncVec { entries: self.entries.iter().map(|a| a.scale(c)).collect() }
    }

    /// Entrywise multiplication by `t`.
    pub fn m_apply(&self) -> RatFuncVec {
        RatFuncVec { entries: self.entries.iter().map(RatFunc::m_apply).collect() }
    }

    /// Largest entry degree, `−∞` for the zero vector.
    pub fn delta(&self) -> GradedDegree {
        self.entries.iter().map(RatFunc::degree).max().unwrap_or(GradedDegree::NegInf)
    }
}

impl std::fmt::Display for RatFuncVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Fails with [`Error::NotIndependent`] unless `basis` is `T′`-independent up to `degree_cap`.
pub fn check_independent(op: &Operator, basis: &[FinSuppVec], degree_cap: usize) -> Result<IndependenceReport> {
    if basis.iter().any(FinSuppVec::is_zero) {
        return Err(Error::Input("basis contains the zero functional".into()));
    }
    relations::independence(op, basis, degree_cap).map_err(|s| Error::NotIndependent(Box::new(s)))
}

/// Representation of `x` over an independent `basis`, found with all degrees
/// `≤ degree_cap`; `None` when no such representation exists.
pub fn represent(op: &Operator, basis: &[FinSuppVec], x: &FinSuppVec, degree_cap: usize) -> Result<Option<Representation>> {
    enter_search("represent");
    check_independent(op, basis, degree_cap)?;
    represent_unchecked(op, basis, x, degree_cap)
}

pub(crate) fn represent_unchecked(
    op: &Operator,
    basis: &[FinSuppVec],
    x: &FinSuppVec,
    degree_cap: usize,
) -> Result<Option<Representation>> {
    let field = op.field();
    if x.is_zero() {
        return Ok(Some(Representation {
            x: x.clone(),
            basis: basis.to_vec(),
            q: Poly::one(field),
            p: vec![Poly::zero(field); basis.len()],
        }));
    }
    let mut family = vec![x.clone()];
    family.extend(basis.iter().cloned());
    let Some(polys) = krylov_relation(op, &family, degree_cap) else {
        return Ok(None);
    };
    let (q, p) = relation_to_representation(&polys).ok_or_else(|| {
        Error::NotIndependent(Box::new(Syzygy {
            generators: basis.to_vec(),
            polys: polys[1..].to_vec(),
            degree_cap,
        }))
    })?;
    let rep = Representation { x: x.clone(), basis: basis.to_vec(), q, p };
    debug_assert!(rep.check(op).is_ok());
    Ok(Some(rep))
}

/// `J x` relative to `basis`.
pub fn j_map(op: &Operator, basis: &[FinSuppVec], x: &FinSuppVec, degree_cap: usize) -> Result<RatFuncVec> {
    enter_search("j_map");
    check_independent(op, basis, degree_cap)?;
    j_map_unchecked(op, basis, x, degree_cap)
}

fn j_map_unchecked(op: &Operator, basis: &[FinSuppVec], x: &FinSuppVec, degree_cap: usize) -> Result<RatFuncVec> {
    represent_unchecked(op, basis, x, degree_cap)?
        .map(|r| r.j_image())
        .ok_or_else(|| Error::Unknown(format!("{x} has no representation within degree {degree_cap}")))
}

/// Whether `J(T′x) = M·J(x)`.
pub fn verify_intertwine(op: &Operator, basis: &[FinSuppVec], x: &FinSuppVec, degree_cap: usize) -> Result<bool> {
    enter_search("verify_intertwine");
    check_independent(op, basis, degree_cap)?;
    let jx = j_map_unchecked(op, basis, x, degree_cap)?;
    let jtx = j_map_unchecked(op, basis, &op.dual_apply(x), degree_cap)?;
    Ok(jtx == jx.m_apply())
}

/// Whether `J(αx + βy) = αJx + βJy`.
pub fn linearity_check(
    op: &Operator,
    basis: &[FinSuppVec],
    (x, y): (&FinSuppVec, &FinSuppVec),
    (alpha, beta): (&Scalar, &Scalar),
    degree_cap: usize,
) -> Result<bool> {
    enter_search("linearity_check");
    check_independent(op, basis, degree_cap)?;
    let jx = j_map_unchecked(op, basis, x, degree_cap)?;
    let jy = j_map_unchecked(op, basis, y, degree_cap)?;
    let combo = x.scale(alpha).add(&y.scale(beta));
    let jc = j_map_unchecked(op, basis, &combo, degree_cap)?;
    Ok(jc == jx.scale(alpha).add(&jy.scale(beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{EventuallyPeriodicSeq, Expr};

    fn backward() -> Operator {
        Operator::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones())).unwrap()
    }

    fn e(n: usize) -> FinSuppVec {
        FinSuppVec::basis(n, Field::Q)
    }

    fn rf(text_num: &str, text_den: &str) -> RatFunc {
        RatFunc::new(text_num.parse().unwrap(), text_den.parse().unwrap()).unwrap()
    }

    #[test]
    fn backward_shift_images() {
        let op = backward();
        assert_eq!(j_map(&op, &[e(1)], &e(3), 12).unwrap(), RatFuncVec::new(vec![rf("t^2", "1")]));
        let x = e(1).add(&e(2).scale(&Scalar::from_i64(2, Field::Q)));
        assert_eq!(j_map(&op, &[e(1)], &x, 12).unwrap(), RatFuncVec::new(vec![rf("2*t + 1", "1")]));
        assert_eq!(j_map(&op, &[e(2)], &e(1), 12).unwrap(), RatFuncVec::new(vec![rf("1", "t")]));
    }

    #[test]
    fn zero_maps_to_zero() {
        let op = backward();
        assert!(j_map(&op, &[e(1)], &FinSuppVec::zero(), 4).unwrap().is_zero());
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let op = backward();
        assert!(matches!(j_map(&op, &[e(1), e(2)], &e(3), 4), Err(Error::NotIndependent(_))));
    }

    #[test]
    fn intertwining_and_linearity() {
        let op = backward();
        let b = [e(2)];
        for n in 1..6 {
            assert!(verify_intertwine(&op, &b, &e(n), 12).unwrap());
        }
        let two = Scalar::from_i64(2, Field::Q);
        let half = Scalar::ratio(-1, 2);
        assert!(linearity_check(&op, &b, (&e(1), &e(4)), (&two, &half), 12).unwrap());
    }
}
