//! Polynomial relations among functionals under `T′`, torsion detection, and
//! the classification verdict.
//!
//! A family `x_1, …, x_n` is `T′`-dependent when `Σ p_j(T′)x_j = 0` for
//! polynomials not all zero. Relations of bounded degree are found by exact
//! elimination on the Krylov columns `T′^k x_j`, inserted in the order
//! `(k, j)` with `k` outer, so the first dependent column yields a relation
//! of least maximal degree. A functional is torsion when some nonzero
//! polynomial annihilates it; torsion spans a finite-dimensional
//! `T′`-invariant subspace, and its absence for all functionals is exactly
//! mixing of `T`.

use serde::{Deserialize, Serialize};

use crate::arith::{Field, Poly, Scalar};
use crate::error::{Error, Result};
use crate::guard::enter_search;
use crate::linalg::{self, Echelon, Insertion};
use crate::operators::{FinSuppVec, Operator};

/// How many times [`torsion_in_span`] may raise its internal degree cap.
pub const MAX_ESCALATIONS: usize = 4;

/// A nontrivial relation `Σ_j polys[j](T′)·generators[j] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syzygy {
    pub generators: Vec<FinSuppVec>,
    pub polys: Vec<Poly>,
    pub degree_cap: usize,
}

impl Syzygy {
    pub fn check(&self, op: &Operator) -> Result<(), String> {
        if self.generators.len() != self.polys.len() {
            return Err("generator and polynomial lists differ in length".into());
        }
        if self.polys.iter().all(Poly::is_zero) {
            return Err("all relation polynomials are zero".into());
        }
        if let Some(j) = self.polys.iter().position(|p| p.deg().is_some_and(|d| d > self.degree_cap)) {
            return Err(format!("polynomial {j} exceeds the degree cap {}", self.degree_cap));
        }
        let total = self
            .generators
            .iter()
            .zip(&self.polys)
            .fold(FinSuppVec::zero(), |acc, (x, p)| acc.add(&op.poly_dual_apply(p, x)));
        if !total.is_zero() {
            return Err(format!("Σ p_j(T′)x_j = {total} ≠ 0"));
        }
        Ok(())
    }
}

/// No relation with all degrees `≤ degree_cap` exists among `generators`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub generators: Vec<FinSuppVec>,
    pub degree_cap: usize,
    /// Smallest and largest index touched by the Krylov columns.
    pub support_window: (usize, usize),
}

impl IndependenceReport {
    pub fn check(&self, op: &Operator) -> Result<(), String> {
        if self.generators.iter().any(FinSuppVec::is_zero) {
            return Err("a generator is zero".into());
        }
        let cols = krylov_columns(op, &self.generators, self.degree_cap);
        let window = support_window(&cols);
        if window != self.support_window {
            return Err(format!("support window {:?} does not match recomputed {:?}", self.support_window, window));
        }
        let rank = linalg::rank(&cols);
        if rank != cols.len() {
            return Err(format!("Krylov matrix has rank {rank} < {} columns", cols.len()));
        }
        Ok(())
    }
}

/// `q(T′)·generators[index] = Σ_a p[a](T′)·generators[independent[a]]`, `q` monic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepRow {
    pub index: usize,
    pub q: Poly,
    pub p: Vec<Poly>,
}

impl RepRow {
    fn check(&self, op: &Operator, generators: &[FinSuppVec], independent: &[usize]) -> Result<(), String> {
        if self.p.len() != independent.len() {
            return Err(format!("representation of generator {} has the wrong length", self.index));
        }
        if self.q.is_zero() || !self.q.leading().is_some_and(Scalar::is_one) {
            return Err(format!("denominator of generator {} is not monic", self.index));
        }
        let x = generators.get(self.index).ok_or("representation index out of range")?;
        let lhs = op.poly_dual_apply(&self.q, x);
        let rhs = independent
            .iter()
            .zip(&self.p)
            .fold(FinSuppVec::zero(), |acc, (&a, p)| acc.add(&op.poly_dual_apply(p, &generators[a])));
        if lhs != rhs {
            return Err(format!("q(T′)x ≠ Σ p_a(T′)a for generator {}", self.index));
        }
        Ok(())
    }
}

/// Greedy maximal `T′`-independent subfamily (up to `degree_cap`) and
/// representations of the remaining generators over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub generators: Vec<FinSuppVec>,
    /// Positions in `generators` of the kept vectors `B`, in scan order.
    pub independent: Vec<usize>,
    pub representations: Vec<RepRow>,
    pub degree_cap: usize,
}

impl GreedyResult {
    pub fn basis(&self) -> Vec<FinSuppVec> {
        self.independent.iter().map(|&i| self.generators[i].clone()).collect()
    }

    pub fn check(&self, op: &Operator) -> Result<(), String> {
        check_partition(self.generators.len(), &self.independent, &self.representations)?;
        for rep in &self.representations {
            rep.check(op, &self.generators, &self.independent)?;
        }
        let b = self.basis();
        if !linalg::is_independent(&krylov_columns(op, &b, self.degree_cap)) {
            return Err(format!("kept vectors are dependent within degree {}", self.degree_cap));
        }
        Ok(())
    }
}

fn check_partition(n: usize, independent: &[usize], reps: &[RepRow]) -> Result<(), String> {
    let mut seen = vec![false; n];
    for &i in independent.iter().chain(reps.iter().map(|r| &r.index)) {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(format!("generator {i} is missing or listed twice"));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err("not every generator is kept or represented".into());
    }
    Ok(())
}

/// A nonzero functional with `annihilator(T′)x = 0`, together with a basis of
/// the `T′`-invariant subspace `span{x, T′x, …, T′^{k−1}x}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub x: FinSuppVec,
    pub annihilator: Poly,
    pub invariant_basis: Vec<FinSuppVec>,
}

impl TorsionCertificate {
    pub fn check(&self, op: &Operator) -> Result<(), String> {
        if self.x.is_zero() {
            return Err("torsion functional is zero".into());
        }
        if self.annihilator.is_zero() {
            return Err("annihilator is zero".into());
        }
        let image = op.poly_dual_apply(&self.annihilator, &self.x);
        if !image.is_zero() {
            return Err(format!("annihilator(T′)x = {image} ≠ 0"));
        }
        let mut span = Echelon::new();
        for b in &self.invariant_basis {
            if span.insert(b) != Insertion::Independent {
                return Err("invariant basis is linearly dependent".into());
            }
        }
        if !span.contains(&self.x) {
            return Err("x is not in the span of the invariant basis".into());
        }
        for (i, b) in self.invariant_basis.iter().enumerate() {
            if span.express(&op.dual_apply(b)).is_none() {
                return Err(format!("T′ maps basis vector {i} outside the span"));
            }
        }
        Ok(())
    }
}

/// No torsion functional in the span of `generators` has an annihilator of
/// degree `≤ degree_cap`.
///
/// Evidence: the kept vectors are `T′`-independent up to `independence_cap`,
/// the represented generators satisfy their identities, the cleared J-images
/// are linearly independent over the scalars, and
/// `independence_cap ≥ degree_cap + clearing_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoTorsionReport {
    pub generators: Vec<FinSuppVec>,
    pub independent: Vec<usize>,
    pub representations: Vec<RepRow>,
    pub degree_cap: usize,
    pub independence_cap: usize,
    pub clearing_degree: usize,
}

impl NoTorsionReport {
    pub fn basis(&self) -> Vec<FinSuppVec> {
        self.independent.iter().map(|&i| self.generators[i].clone()).collect()
    }

    pub fn check(&self, op: &Operator) -> Result<(), String> {
        if self.generators.iter().any(FinSuppVec::is_zero) {
            return Err("a generator is zero".into());
        }
        if !linalg::is_independent(&self.generators) {
            return Err("generators are linearly dependent".into());
        }
        check_partition(self.generators.len(), &self.independent, &self.representations)?;
        for rep in &self.representations {
            rep.check(op, &self.generators, &self.independent)?;
        }
        let cleared = ClearedImages::new(op.field(), self.generators.len(), &self.independent, &self.representations);
        if cleared.max_degree != self.clearing_degree {
            return Err(format!(
                "clearing degree {} does not match recomputed {}",
                self.clearing_degree, cleared.max_degree
            ));
        }
        if !linalg::is_independent(&cleared.columns) {
            return Err("cleared J-images are linearly dependent (torsion present)".into());
        }
        if self.independence_cap < self.degree_cap + self.clearing_degree {
            return Err(format!(
                "independence cap {} is below degree cap {} + clearing degree {}",
                self.independence_cap, self.degree_cap, self.clearing_degree
            ));
        }
        if !linalg::is_independent(&krylov_columns(op, &self.basis(), self.independence_cap)) {
            return Err(format!("kept vectors are dependent within degree {}", self.independence_cap));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassifyVerdict {
    /// `T′` has a finite-dimensional invariant subspace; `T` is not transitive.
    NotTransitive { support: usize, certificate: TorsionCertificate },
    /// No torsion functional supported in `e_1*, …, e_{support_cap}*` with
    /// annihilator degree `≤ degree_cap`.
    MixingCertifiedUpTo { support_cap: usize, degree_cap: usize, report: NoTorsionReport },
    Unknown { reason: String },
}

impl ClassifyVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifyVerdict::NotTransitive { .. } => "NOT_TRANSITIVE",
            ClassifyVerdict::MixingCertifiedUpTo { .. } => "MIXING_CERTIFIED_UP_TO",
            ClassifyVerdict::Unknown { .. } => "UNKNOWN",
        }
    }

    pub fn check(&self, op: &Operator) -> Result<(), String> {
        match self {
            ClassifyVerdict::NotTransitive { certificate, .. } => certificate.check(op),
            ClassifyVerdict::MixingCertifiedUpTo { support_cap, degree_cap, report } => {
                if report.degree_cap != *degree_cap {
                    return Err("report degree cap differs from the verdict".into());
                }
                let expected = coordinate_functionals(op.field(), *support_cap);
                if report.generators != expected {
                    return Err(format!("report generators are not e_1*, …, e_{support_cap}*"));
                }
                report.check(op)
            }
            ClassifyVerdict::Unknown { .. } => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionOutcome {
    Torsion(TorsionCertificate),
    NoTorsion(NoTorsionReport),
    Unknown(String),
}

/// `e_1*, …, e_s*`.
pub fn coordinate_functionals(field: Field, s: usize) -> Vec<FinSuppVec> {
    (1..=s).map(|n| FinSuppVec::basis(n, field)).collect()
}

/// Krylov columns in insertion order `(k, j)`, `k` outer.
pub fn krylov_columns(op: &Operator, gens: &[FinSuppVec], degree_cap: usize) -> Vec<FinSuppVec> {
    let mut current = gens.to_vec();
    let mut cols = Vec::with_capacity(gens.len() * (degree_cap + 1));
    for k in 0..=degree_cap {
        for x in current.iter_mut() {
            if k > 0 {
                *x = op.dual_apply(x);
            }
            cols.push(x.clone());
        }
    }
    cols
}

fn support_window(cols: &[FinSuppVec]) -> (usize, usize) {
    let lo = cols.iter().filter_map(FinSuppVec::first_index).min().unwrap_or(0);
    let hi = cols.iter().filter_map(FinSuppVec::last_index).max().unwrap_or(0);
    (lo, hi)
}

/// First relation among the Krylov columns, as polynomials per generator.
pub(crate) fn krylov_relation(op: &Operator, gens: &[FinSuppVec], degree_cap: usize) -> Option<Vec<Poly>> {
    let n = gens.len();
    if n == 0 {
        return None;
    }
    let mut current = gens.to_vec();
    let mut e = Echelon::new();
    for k in 0..=degree_cap {
        for g in current.iter_mut() {
            if k > 0 {
                *g = op.dual_apply(g);
            }
            if let Insertion::Dependent(kernel) = e.insert(g) {
                let mut coeffs = vec![vec![Scalar::zero(op.field()); k + 1]; n];
                for (id, c) in kernel.iter() {
                    coeffs[id % n][id / n] = c.clone();
                }
                return Some(coeffs.into_iter().map(|c| Poly::new(op.field(), c)).collect());
            }
        }
    }
    None
}

/// Least-degree monic annihilator of `x` within `degree_cap`.
pub(crate) fn minimal_annihilator(op: &Operator, x: &FinSuppVec, degree_cap: usize) -> Option<Poly> {
    krylov_relation(op, std::slice::from_ref(x), degree_cap).map(|mut p| p.remove(0).monic())
}

/// A nontrivial relation among the nonzero members of `xs` with all degrees
/// `≤ degree_cap`, or `None` when the Krylov columns have full rank.
///
/// Zero vectors are dropped first.
pub fn find_relation(op: &Operator, xs: &[FinSuppVec], degree_cap: usize) -> Option<Syzygy> {
    enter_search("find_relation");
    let generators: Vec<FinSuppVec> = xs.iter().filter(|x| !x.is_zero()).cloned().collect();
    let polys = krylov_relation(op, &generators, degree_cap)?;
    let syzygy = Syzygy { generators, polys, degree_cap };
    if let Err(e) = syzygy.check(op) {
        panic!("internal error: relation failed re-verification: {e}");
    }
    Some(syzygy)
}

/// Either a relation or a certified independence report.
pub fn independence(op: &Operator, xs: &[FinSuppVec], degree_cap: usize) -> std::result::Result<IndependenceReport, Syzygy> {
    match find_relation(op, xs, degree_cap) {
        Some(s) => Err(s),
        None => {
            let generators: Vec<FinSuppVec> = xs.iter().filter(|x| !x.is_zero()).cloned().collect();
            let window = support_window(&krylov_columns(op, &generators, degree_cap));
            Ok(IndependenceReport { generators, degree_cap, support_window: window })
        }
    }
}

/// Normalize a relation with nonzero first polynomial into `q(T′)x = Σ p_a(T′)a`.
pub(crate) fn relation_to_representation(polys: &[Poly]) -> Option<(Poly, Vec<Poly>)> {
    let lead = polys[0].leading()?.inv().expect("nonzero");
    let q = polys[0].scale(&lead);
    let p = polys[1..].iter().map(|p| -&p.scale(&lead)).collect();
    Some((q, p))
}

/// Scan `xs` in order, keeping each vector that admits no relation with the
/// vectors kept so far, and representing the others over the kept ones.
///
/// Zero vectors are dropped first. Fails with [`Error::Degenerate`] when a
/// relation has zero coefficient on the scanned vector, which means the kept
/// family is dependent at this cap.
pub fn greedy_independent_subset(op: &Operator, xs: &[FinSuppVec], degree_cap: usize) -> Result<GreedyResult> {
    enter_search("greedy_independent_subset");
    let generators: Vec<FinSuppVec> = xs.iter().filter(|x| !x.is_zero()).cloned().collect();
    let mut independent: Vec<usize> = Vec::new();
    let mut representations = Vec::new();
    for (i, x) in generators.iter().enumerate() {
        let mut family = vec![x.clone()];
        family.extend(independent.iter().map(|&b| generators[b].clone()));
        match krylov_relation(op, &family, degree_cap) {
            None => independent.push(i),
            Some(polys) => {
                let (q, p) = relation_to_representation(&polys).ok_or_else(|| {
                    Error::Degenerate(format!(
                        "relation for generator {i} has zero coefficient on it; kept vectors are dependent within degree {degree_cap}"
                    ))
                })?;
                representations.push(RepRow { index: i, q, p });
            }
        }
    }
    let width = independent.len();
    for rep in &mut representations {
        rep.p.resize(width, Poly::zero(op.field()));
    }
    Ok(GreedyResult { generators, independent, representations, degree_cap })
}

/// J-images of the generators multiplied through by the monic lcm `Q` of all
/// representation denominators, flattened to sparse columns keyed by
/// `(position in B, degree)`.
pub(crate) struct ClearedImages {
    pub common_denominator: Poly,
    pub columns: Vec<FinSuppVec>,
    pub max_degree: usize,
}

impl ClearedImages {
    pub fn new(field: Field, n: usize, independent: &[usize], reps: &[RepRow]) -> ClearedImages {
        let q = reps.iter().fold(Poly::one(field), |acc, r| acc.lcm(&r.q));
        let mut polys: Vec<Vec<Poly>> = vec![vec![Poly::zero(field); independent.len()]; n];
        for (a, &i) in independent.iter().enumerate() {
            polys[i][a] = q.clone();
        }
        for r in reps {
            let factor = q.exact_div(&r.q).expect("lcm is divisible by each denominator");
            polys[r.index] = r.p.iter().map(|p| &factor * p).collect();
        }
        let max_degree = polys.iter().flatten().filter_map(Poly::deg).max().unwrap_or(0);
        let stride = max_degree + 1;
        let columns = polys
            .iter()
            .map(|row| {
                FinSuppVec::from_entries(
                    row.iter()
                        .enumerate()
                        .flat_map(|(a, p)| p.coeffs().iter().enumerate().map(move |(e, c)| (a * stride + e, c.clone())))
                        .collect(),
                )
            })
            .collect();
        ClearedImages { common_denominator: q, columns, max_degree }
    }
}

/// Build the certificate for the torsion functional `x`, known to be killed by `bound`.
pub(crate) fn torsion_certificate(op: &Operator, x: FinSuppVec, bound: &Poly) -> Option<TorsionCertificate> {
    let cap = bound.deg()?;
    let annihilator = minimal_annihilator(op, &x, cap)?;
    let k = annihilator.deg()?;
    let mut invariant_basis = op.krylov(&x, k.max(1) - 1);
    invariant_basis.truncate(k);
    let cert = TorsionCertificate { x, annihilator, invariant_basis };
    cert.check(op).ok()?;
    Some(cert)
}

/// Search the span of `xs` for a torsion functional.
///
/// Zero and linearly dependent vectors are dropped. The remaining generators
/// are split into a greedy independent family `B` and representations over
/// it; a nonzero combination `c` with `Σ c_j J(x_j) = 0` gives torsion
/// `x = Σ c_j x_j`. When the J-images are independent, `B` is additionally
/// checked to be independent up to `degree_cap + N`, `N` the largest degree
/// among the cleared images, which rules out torsion with annihilator degree
/// `≤ degree_cap`. If `B` fails that check the cap is raised and the scan
/// repeated, at most [`MAX_ESCALATIONS`] times.
pub fn torsion_in_span(op: &Operator, xs: &[FinSuppVec], degree_cap: usize) -> TorsionOutcome {
    enter_search("torsion_in_span");
    let nonzero: Vec<FinSuppVec> = xs.iter().filter(|x| !x.is_zero()).cloned().collect();
    let generators: Vec<FinSuppVec> =
        linalg::independent_indices(&nonzero).into_iter().map(|i| nonzero[i].clone()).collect();
    let mut cap = degree_cap;
    for _ in 0..=MAX_ESCALATIONS {
        let greedy = match greedy_independent_subset(op, &generators, cap) {
            Ok(g) => g,
            Err(e) => return TorsionOutcome::Unknown(e.to_string()),
        };
        let cleared = ClearedImages::new(op.field(), generators.len(), &greedy.independent, &greedy.representations);
        if let Some(c) = linalg::first_dependency(&cleared.columns) {
            let x = linalg::combine(&c, &generators);
            return match torsion_certificate(op, x, &cleared.common_denominator) {
                Some(cert) => TorsionOutcome::Torsion(cert),
                None => TorsionOutcome::Unknown("torsion candidate failed re-verification".into()),
            };
        }
        let required = degree_cap + cleared.max_degree;
        let basis = greedy.basis();
        let certified = required <= cap || krylov_relation(op, &basis, required).is_none();
        if certified {
            return TorsionOutcome::NoTorsion(NoTorsionReport {
                generators,
                independent: greedy.independent,
                representations: greedy.representations,
                degree_cap,
                independence_cap: required.max(cap),
                clearing_degree: cleared.max_degree,
            });
        }
        cap = required;
    }
    TorsionOutcome::Unknown(format!(
        "kept vectors stayed dependent after {MAX_ESCALATIONS} degree escalations (last cap {cap})"
    ))
}

/// Search `e_1*, …, e_s*` for torsion, `s = 1, …, support_cap`.
pub fn classify(op: &Operator, support_cap: usize, degree_cap: usize) -> ClassifyVerdict {
    enter_search("classify");
    if support_cap < 1 || degree_cap < 1 {
        return ClassifyVerdict::Unknown {
            reason: format!("caps ({support_cap}, {degree_cap}) certify nothing; both must be at least 1"),
        };
    }
    let mut last = None;
    for s in 1..=support_cap {
        match torsion_in_span(op, &coordinate_functionals(op.field(), s), degree_cap) {
            TorsionOutcome::Torsion(certificate) => return ClassifyVerdict::NotTransitive { support: s, certificate },
            TorsionOutcome::Unknown(reason) => {
                return ClassifyVerdict::Unknown { reason: format!("support {s}: {reason}") };
            }
            TorsionOutcome::NoTorsion(report) => last = Some(report),
        }
    }
    ClassifyVerdict::MixingCertifiedUpTo {
        support_cap,
        degree_cap,
        report: last.expect("support_cap ≥ 1"),
    }
}

/// Re-check any relations certificate by arithmetic only.
pub fn verify_certificate(op: &Operator, cert: &RelationsCertificate) -> Result<(), String> {
    let _lock = crate::guard::forbid_search();
    match cert {
        RelationsCertificate::Syzygy(s) => s.check(op),
        RelationsCertificate::Independence(r) => r.check(op),
        RelationsCertificate::Greedy(g) => g.check(op),
        RelationsCertificate::Torsion(t) => t.check(op),
        RelationsCertificate::NoTorsion(r) => r.check(op),
        RelationsCertificate::Classify(v) => v.check(op),
    }
}

/// The certificate types produced by this module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationsCertificate {
    Syzygy(Syzygy),
    Independence(IndependenceReport),
    Greedy(GreedyResult),
    Torsion(TorsionCertificate),
    NoTorsion(NoTorsionReport),
    Classify(ClassifyVerdict),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{EventuallyPeriodicSeq, Expr};

    fn e(n: usize) -> FinSuppVec {
        FinSuppVec::basis(n, Field::Q)
    }

    fn poly(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn op(expr: Expr) -> Operator {
        Operator::new(Field::Q, expr).unwrap()
    }

    fn backward() -> Operator {
        op(Expr::backward_shift(EventuallyPeriodicSeq::ones()))
    }

    fn forward() -> Operator {
        op(Expr::forward_shift(EventuallyPeriodicSeq::ones()))
    }

    #[test]
    fn relation_examples() {
        let s = find_relation(&forward(), &[e(1)], 1).unwrap();
        assert_eq!(s.polys, vec![poly("t")]);
        assert!(find_relation(&backward(), &[e(1)], 10).is_none());
        let s = find_relation(&backward(), &[e(1), e(2)], 1).unwrap();
        assert_eq!(s.polys, vec![poly("t"), poly("-1")]);
        assert!(s.check(&backward()).is_ok());
    }

    #[test]
    fn zero_vectors_are_dropped() {
        assert!(find_relation(&backward(), &[FinSuppVec::zero(), e(1)], 5).is_none());
        let r = independence(&backward(), &[e(1)], 3).unwrap();
        assert_eq!(r.support_window, (1, 4));
        assert!(r.check(&backward()).is_ok());
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_independent_subset(&backward(), &[e(1), e(2), e(3)], 12).unwrap();
        assert_eq!(g.independent, vec![0]);
        let reps: Vec<_> = g.representations.iter().map(|r| (r.index, r.q.clone(), r.p.clone())).collect();
        assert_eq!(reps, vec![(1, poly("1"), vec![poly("t")]), (2, poly("1"), vec![poly("t^2")])]);

        let g = greedy_independent_subset(&backward(), &[e(2), e(1)], 12).unwrap();
        assert_eq!(g.independent, vec![0]);
        assert_eq!((g.representations[0].q.clone(), g.representations[0].p.clone()), (poly("t"), vec![poly("1")]));
        assert!(g.check(&backward()).is_ok());
    }

    #[test]
    fn torsion_examples() {
        match torsion_in_span(&backward(), &[e(1), e(2), e(3)], 12) {
            TorsionOutcome::NoTorsion(r) => assert!(r.check(&backward()).is_ok()),
            other => panic!("{other:?}"),
        }
        let TorsionOutcome::Torsion(c) = torsion_in_span(&forward(), &[e(1)], 12) else { panic!() };
        assert_eq!((c.x.clone(), c.annihilator.clone(), c.invariant_basis.clone()), (e(1), poly("t"), vec![e(1)]));
        let diag = op(Expr::diagonal(EventuallyPeriodicSeq::periodic(vec![
            Scalar::from_i64(3, Field::Q),
            Scalar::from_i64(5, Field::Q),
        ])));
        let TorsionOutcome::Torsion(c) = torsion_in_span(&diag, &[e(1)], 12) else { panic!() };
        assert_eq!(c.annihilator, poly("t - 3"));
    }

    #[test]
    fn classify_examples() {
        let v = classify(&backward(), 8, 12);
        assert_eq!(v.name(), "MIXING_CERTIFIED_UP_TO");
        assert!(v.check(&backward()).is_ok());
        let v = classify(&forward(), 1, 1);
        let ClassifyVerdict::NotTransitive { certificate, .. } = &v else { panic!("{v:?}") };
        assert_eq!(certificate.annihilator, poly("t"));
        assert_eq!(classify(&backward(), 1, 0).name(), "UNKNOWN");
    }

    #[test]
    fn tampered_certificates_fail() {
        let good = TorsionCertificate { x: e(1), annihilator: poly("t"), invariant_basis: vec![e(1)] };
        assert!(good.check(&forward()).is_ok());
        let wrong = TorsionCertificate { annihilator: poly("t - 1"), ..good.clone() };
        assert!(wrong.check(&forward()).unwrap_err().contains("annihilator"));
        let not_closed = TorsionCertificate { invariant_basis: vec![e(1), e(5)], ..good };
        assert!(not_closed.check(&forward()).is_err());
    }

    #[test]
    fn verification_runs_without_search() {
        let v = classify(&backward(), 3, 4);
        assert!(verify_certificate(&backward(), &RelationsCertificate::Classify(v)).is_ok());
    }
}
