//! Degree bounds for `p(T′)(L) ∩ L = {0}`.
//!
//! For a finite-dimensional torsion-free `L ⊂ φ` with J-images `J(L) ⊂ 𝕂(t)^r`,
//! let `Δ⁺` be the largest entry degree over a basis of images and `Δ⁻` the
//! least `δ(v)` over nonzero `v ∈ J(L)`. Since `J(p(T′)x) = p·J(x)`, every
//! `p` of degree `≥ m = Δ⁺ − Δ⁻ + 1` pushes `J(L)` strictly above `Δ⁺`, so
//! `p(T′)(L) ∩ L = {0}`.

use serde::{Deserialize, Serialize};

use crate::arith::{GradedDegree, Poly, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::guard::enter_search;
use crate::linalg;
use crate::operators::{FinSuppVec, Operator};
use crate::relations::{self, krylov_columns, RepRow, TorsionOutcome};
use crate::structure::{check_independent, represent_unchecked, RatFuncVec};

/// `m(L)`, or the marker for `L = {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MValue {
    Finite(i64),
    Empty(EmptySpace),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EmptySpace {
    EmptySpace,
}

impl MValue {
    pub const EMPTY: MValue = MValue::Empty(EmptySpace::EmptySpace);

    pub fn finite(self) -> Option<i64> {
        match self {
            MValue::Finite(m) => Some(m),
            MValue::Empty(_) => None,
        }
    }
}

impl std::fmt::Display for MValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MValue::Finite(m) => write!(f, "{m}"),
            MValue::Empty(_) => f.write_str("EMPTY_SPACE"),
        }
    }
}

/// `δ(v)`: the largest entry degree of `v`, `−∞` for `v = 0`.
pub fn delta(v: &RatFuncVec) -> GradedDegree {
    v.delta()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaBounds {
    pub delta_plus: GradedDegree,
    pub delta_minus: GradedDegree,
    pub m: MValue,
    /// Coefficients over the images of a vector attaining `Δ⁻`.
    pub minimizer: Vec<Scalar>,
}

/// Images multiplied through by the monic lcm `Q` of all denominators.
struct Cleared {
    common_denominator: Poly,
    numerators: Vec<Vec<Poly>>,
    max_degree: usize,
}

impl Cleared {
    fn new(images: &[RatFuncVec]) -> Cleared {
        let field = images.iter().flat_map(|v| v.entries()).fold(crate::Field::Q, |f, r| f.join(r.field()));
        let q = images.iter().flat_map(|v| v.entries()).fold(Poly::one(field), |acc, r| acc.lcm(r.den()));
        let numerators: Vec<Vec<Poly>> = images
            .iter()
            .map(|v| {
                v.entries()
                    .iter()
                    .map(|r| r.num() * &q.exact_div(r.den()).expect("lcm is divisible by each denominator"))
                    .collect()
            })
            .collect();
        let max_degree = numerators.iter().flatten().filter_map(Poly::deg).max().unwrap_or(0);
        Cleared { common_denominator: q, numerators, max_degree }
    }

    /// Coefficients of degree `> above` (all when `above` is `None`), keyed by `(entry, degree)`.
    fn columns(&self, above: Option<usize>) -> Vec<FinSuppVec> {
        let stride = self.max_degree + 1;
        let lo = above.map_or(0, |d| d + 1);
        self.numerators
            .iter()
            .map(|row| {
                FinSuppVec::from_entries(
                    row.iter()
                        .enumerate()
                        .flat_map(|(a, p)| {
                            p.coeffs()
                                .iter()
                                .enumerate()
                                .skip(lo)
                                .map(move |(e, c)| (a * stride + e, c.clone()))
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// `Δ⁺`, `Δ⁻` and `m` of the span of `images`.
///
/// Fails with [`Error::Input`] when the images are linearly dependent, which
/// means the underlying space contains torsion.
pub fn delta_bounds(images: &[RatFuncVec]) -> Result<DeltaBounds> {
    if images.iter().all(RatFuncVec::is_zero) {
        return Ok(DeltaBounds {
            delta_plus: GradedDegree::NegInf,
            delta_minus: GradedDegree::NegInf,
            m: MValue::EMPTY,
            minimizer: Vec::new(),
        });
    }
    let cleared = Cleared::new(images);
    if let Some(c) = linalg::first_dependency(&cleared.columns(None)) {
        return Err(Error::Input(format!("images are linearly dependent (relation {c})")));
    }
    let delta_plus = images.iter().map(RatFuncVec::delta).max().expect("nonempty");
    let q_deg = cleared.common_denominator.deg().expect("nonzero") as i64;
    // With all coefficients of degree > d' removed, a dependency c means Σ c_i Q·v_i has degree ≤ d'.
    for d in 0..=cleared.max_degree {
        if let Some(c) = linalg::first_dependency(&cleared.columns(Some(d))) {
            let delta_minus = GradedDegree::Finite(d as i64 - q_deg);
            let m = match (delta_plus, delta_minus) {
                (GradedDegree::Finite(p), GradedDegree::Finite(n)) => p - n + 1,
                _ => unreachable!("nonzero images have finite degrees"),
            };
            return Ok(DeltaBounds { delta_plus, delta_minus, m: MValue::Finite(m), minimizer: linalg::dense_coefficients(&c, images.len(), cleared.common_denominator.field()) });
        }
    }
    unreachable!("all coefficients removed at the largest degree")
}

/// `m(L)` for `L = span(basis)` with the evidence that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub basis: Vec<FinSuppVec>,
    /// The `T′`-independent family `B` defining `J`.
    pub independent: Vec<FinSuppVec>,
    /// `q_i(T′)·basis[i] = Σ_a p_ia(T′)·independent[a]`; `index` is `i`.
    pub representations: Vec<RepRow>,
    pub independence_cap: usize,
    pub images: Vec<RatFuncVec>,
    pub delta_plus: GradedDegree,
    pub delta_minus: GradedDegree,
    pub m: MValue,
    pub minimizer: Vec<Scalar>,
}

impl BoundReport {
    fn empty() -> BoundReport {
        BoundReport {
            basis: Vec::new(),
            independent: Vec::new(),
            representations: Vec::new(),
            independence_cap: 0,
            images: Vec::new(),
            delta_plus: GradedDegree::NegInf,
            delta_minus: GradedDegree::NegInf,
            m: MValue::EMPTY,
            minimizer: Vec::new(),
        }
    }

    fn assemble(basis: &[FinSuppVec], independent: Vec<FinSuppVec>, reps: Vec<RepRow>, cap: usize) -> Result<BoundReport> {
        let images: Vec<RatFuncVec> = reps.iter().map(rep_image).collect();
        let bounds = delta_bounds(&images)?;
        Ok(BoundReport {
            basis: basis.to_vec(),
            independent,
            representations: reps,
            independence_cap: cap,
            images,
            delta_plus: bounds.delta_plus,
            delta_minus: bounds.delta_minus,
            m: bounds.m,
            minimizer: bounds.minimizer,
        })
    }

    pub fn check(&self, op: &Operator) -> Result<(), String> {
        if self.basis.is_empty() {
            return if *self == BoundReport::empty() { Ok(()) } else { Err("inconsistent empty-space report".into()) };
        }
        if self.basis.iter().any(FinSuppVec::is_zero) || !linalg::is_independent(&self.basis) {
            return Err("basis of L is not linearly independent".into());
        }
        if self.representations.len() != self.basis.len() || self.images.len() != self.basis.len() {
            return Err("one representation and one image per basis vector required".into());
        }
        for (i, rep) in self.representations.iter().enumerate() {
            if rep.index != i || rep.p.len() != self.independent.len() {
                return Err(format!("representation {i} is misaligned"));
            }
            if !rep.q.leading().is_some_and(Scalar::is_one) {
                return Err(format!("denominator of representation {i} is not monic"));
            }
            let lhs = op.poly_dual_apply(&rep.q, &self.basis[i]);
            let rhs = self
                .independent
                .iter()
                .zip(&rep.p)
                .fold(FinSuppVec::zero(), |acc, (b, p)| acc.add(&op.poly_dual_apply(p, b)));
            if lhs != rhs {
                return Err(format!("q(T′)x ≠ Σ p_a(T′)b_a for basis vector {i}"));
            }
            let used = rep.p.iter().chain(std::iter::once(&rep.q)).filter_map(Poly::deg).max().unwrap_or(0);
            if used > self.independence_cap {
                return Err(format!("representation {i} has degree {used} beyond the independence cap"));
            }
            if rep_image(rep) != self.images[i] {
                return Err(format!("image {i} does not equal p/q"));
            }
        }
        if !linalg::is_independent(&krylov_columns(op, &self.independent, self.independence_cap)) {
            return Err(format!("B is dependent within degree {}", self.independence_cap));
        }
        let bounds = delta_bounds(&self.images).map_err(|e| e.to_string())?;
        if (bounds.delta_plus, bounds.delta_minus, bounds.m) != (self.delta_plus, self.delta_minus, self.m) {
            return Err(format!(
                "recomputed (Δ⁺, Δ⁻, m) = ({}, {}, {}) differs from ({}, {}, {})",
                bounds.delta_plus, bounds.delta_minus, bounds.m, self.delta_plus, self.delta_minus, self.m
            ));
        }
        if self.minimizer.len() != self.images.len() {
            return Err("minimizer length differs from the number of images".into());
        }
        let attained = combine_images(&self.minimizer, &self.images);
        if attained.is_zero() || attained.delta() != self.delta_minus {
            return Err("minimizer does not attain Δ⁻".into());
        }
        Ok(())
    }
}

fn rep_image(rep: &RepRow) -> RatFuncVec {
    RatFuncVec::new(rep.p.iter().map(|p| RatFunc::new(p.clone(), rep.q.clone()).expect("q ≠ 0")).collect())
}

fn combine_images(c: &[Scalar], images: &[RatFuncVec]) -> RatFuncVec {
    let len = images.first().map_or(0, RatFuncVec::len);
    let field = images.iter().flat_map(|v| v.entries()).fold(crate::Field::Q, |f, r| f.join(r.field()));
    c.iter()
        .zip(images)
        .fold(RatFuncVec::zero(field, len), |acc, (s, v)| acc.add(&v.scale(s)))
}

fn check_basis(basis: &[FinSuppVec]) -> Result<()> {
    if basis.iter().any(FinSuppVec::is_zero) {
        return Err(Error::Input("basis of L contains the zero functional".into()));
    }
    if !linalg::is_independent(basis) {
        return Err(Error::Input("basis of L is linearly dependent".into()));
    }
    Ok(())
}

/// `m(L)` with `B` chosen greedily from `basis`.
///
/// Fails with [`Error::Torsion`] when `L` contains torsion and with
/// [`Error::Unknown`] when the caps are insufficient.
pub fn m_of_l(op: &Operator, basis: &[FinSuppVec], degree_cap: usize) -> Result<BoundReport> {
    enter_search("m_of_l");
    if basis.is_empty() {
        return Ok(BoundReport::empty());
    }
    check_basis(basis)?;
    let report = match relations::torsion_in_span(op, basis, degree_cap) {
        TorsionOutcome::Torsion(c) => return Err(Error::Torsion(Box::new(c))),
        TorsionOutcome::Unknown(reason) => return Err(Error::Unknown(reason)),
        TorsionOutcome::NoTorsion(r) => r,
    };
    let field = op.field();
    let width = report.independent.len();
    let mut reps: Vec<RepRow> = (0..basis.len())
        .map(|i| RepRow { index: i, q: Poly::one(field), p: vec![Poly::zero(field); width] })
        .collect();
    for (a, &i) in report.independent.iter().enumerate() {
        reps[i].p[a] = Poly::one(field);
    }
    for r in &report.representations {
        reps[r.index] = r.clone();
    }
    BoundReport::assemble(basis, report.basis(), reps, report.independence_cap)
}

/// `m(L)` computed relative to a caller-chosen independent family `B`.
pub fn m_of_l_with_basis(
    op: &Operator,
    basis: &[FinSuppVec],
    independent: &[FinSuppVec],
    degree_cap: usize,
) -> Result<BoundReport> {
    enter_search("m_of_l_with_basis");
    if basis.is_empty() {
        return Ok(BoundReport::empty());
    }
    check_basis(basis)?;
    check_independent(op, independent, degree_cap)?;
    let mut reps = Vec::with_capacity(basis.len());
    for (i, x) in basis.iter().enumerate() {
        let rep = represent_unchecked(op, independent, x, degree_cap)?
            .ok_or_else(|| Error::Unknown(format!("basis vector {i} has no representation within degree {degree_cap}")))?;
        reps.push(RepRow { index: i, q: rep.q, p: rep.p });
    }
    let images: Vec<RatFuncVec> = reps.iter().map(rep_image).collect();
    let cleared = Cleared::new(&images);
    if let Some(c) = linalg::first_dependency(&cleared.columns(None)) {
        let x = linalg::combine(&c, basis);
        let bound = reps.iter().fold(cleared.common_denominator.clone(), |acc, r| acc.lcm(&r.q));
        return Err(match relations::torsion_certificate(op, x, &bound) {
            Some(cert) => Error::Torsion(Box::new(cert)),
            None => Error::Unknown("dependent images but torsion failed re-verification".into()),
        });
    }
    BoundReport::assemble(basis, independent.to_vec(), reps, degree_cap)
}

/// A basis of `p(T′)(L) ∩ L`, by direct elimination.
pub fn brute_intersection(op: &Operator, basis: &[FinSuppVec], p: &Poly) -> Vec<FinSuppVec> {
    let images: Vec<FinSuppVec> = basis.iter().map(|b| op.poly_dual_apply(p, b)).collect();
    let n = images.len();
    let stacked: Vec<FinSuppVec> = images.iter().chain(basis).cloned().collect();
    let spanning: Vec<FinSuppVec> = linalg::kernel_basis(&stacked)
        .iter()
        .map(|k| {
            let c = FinSuppVec::from_entries(k.iter().filter(|(i, _)| *i < n).cloned().collect());
            linalg::combine(&c, &images)
        })
        .filter(|w| !w.is_zero())
        .collect();
    linalg::independent_indices(&spanning).into_iter().map(|i| spanning[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{EventuallyPeriodicSeq, Expr};
    use crate::Field;

    fn rf(num: &str, den: &str) -> RatFunc {
        RatFunc::new(num.parse().unwrap(), den.parse().unwrap()).unwrap()
    }

    fn e(n: usize) -> FinSuppVec {
        FinSuppVec::basis(n, Field::Q)
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&RatFuncVec::new(vec![rf("t^2", "1"), rf("1", "t")])), GradedDegree::Finite(2));
        assert_eq!(delta(&RatFuncVec::new(vec![rf("0", "1"), rf("0", "1")])), GradedDegree::NegInf);
    }

    #[test]
    fn delta_minus_by_cancellation() {
        let images = vec![RatFuncVec::new(vec![rf("t", "1"), rf("1", "1")]), RatFuncVec::new(vec![rf("t", "1"), rf("0", "1")])];
        let b = delta_bounds(&images).unwrap();
        assert_eq!(b.delta_plus, GradedDegree::Finite(1));
        assert_eq!(b.delta_minus, GradedDegree::Finite(0));
        assert_eq!(b.m, MValue::Finite(2));
    }

    #[test]
    fn backward_shift_blocks() {
        let op = Operator::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones())).unwrap();
        let l = [e(1), e(2)];
        let r = m_of_l_with_basis(&op, &l, &[e(1)], 12).unwrap();
        assert_eq!(r.m, MValue::Finite(2));
        let r = m_of_l_with_basis(&op, &l, &[e(2)], 12).unwrap();
        assert_eq!(r.images[0], RatFuncVec::new(vec![rf("1", "t")]));
        assert_eq!(r.m, MValue::Finite(2));
        assert!(r.check(&op).is_ok());
        assert!(m_of_l(&op, &[], 4).unwrap().m == MValue::EMPTY);
    }

    #[test]
    fn brute_intersection_zero_poly() {
        let op = Operator::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones())).unwrap();
        assert!(brute_intersection(&op, &[e(1), e(2)], &Poly::zero(Field::Q)).is_empty());
        assert_eq!(brute_intersection(&op, &[e(1), e(2)], &Poly::t(Field::Q)).len(), 1);
    }
}
