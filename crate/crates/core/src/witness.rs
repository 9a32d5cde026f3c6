//! Explicit orbit witnesses for affine cylinders.
//!
//! A cylinder `{u : f_k(u) = a_k}` is cut out by finitely many functionals.
//! A witness for `p(T)` moving `U = {f_k(u) = a_k}` into `V = {g_j(u) = b_j}`
//! solves the finite system `f_k(u) = a_k`, `(p(T′)g_j)(u) = b_j`, which is
//! solvable whenever the `f_k` and `p(T′)g_j` are linearly independent.

use serde::{Deserialize, Deserializer, Serialize};

use crate::arith::{Field, Poly, Scalar};
use crate::bounds::{m_of_l, BoundReport};
use crate::error::{Error, Result};
use crate::guard::enter_search;
use crate::linalg::{self, Echelon, Insertion, SolveOutcome};
use crate::operators::{FinSuppVec, Operator};

/// `functional(u) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub functional: FinSuppVec,
    pub value: Scalar,
}

impl<'de> Deserialize<'de> for Constraint {
    /// Accepts `{functional, value}`, or `{functional, center, radius}` for a
    /// ball, which is replaced by its center.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            functional: FinSuppVec,
            value: Option<Scalar>,
            center: Option<Scalar>,
            radius: Option<Scalar>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.functional.is_zero() {
            return Err(D::Error::custom("constraint functional is zero"));
        }
        let value = match (raw.value, raw.center, raw.radius) {
            (Some(v), None, None) => v,
            (None, Some(c), Some(r)) => {
                if r.field() != Field::Q || !num_traits::Signed::is_positive(r.re()) {
                    return Err(D::Error::custom("ball radius must be a positive rational"));
                }
                c
            }
            _ => return Err(D::Error::custom("expected either `value` or both `center` and `radius`")),
        };
        Ok(Constraint { functional: raw.functional, value })
    }
}

/// `{u ∈ ω : f_k(u) = a_k for all k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCylinder {
    pub constraints: Vec<Constraint>,
}

impl AffineCylinder {
    pub fn new(constraints: Vec<(FinSuppVec, Scalar)>) -> Result<AffineCylinder> {
        if constraints.iter().any(|(f, _)| f.is_zero()) {
            return Err(Error::Input("constraint functional is zero".into()));
        }
        Ok(AffineCylinder {
            constraints: constraints.into_iter().map(|(functional, value)| Constraint { functional, value }).collect(),
        })
    }

    /// `{u : u_n = value}` for each `(n, value)`.
    pub fn coordinates(field: Field, coords: &[(usize, Scalar)]) -> AffineCylinder {
        AffineCylinder {
            constraints: coords
                .iter()
                .map(|(n, v)| Constraint { functional: FinSuppVec::basis(*n, field), value: v.clone() })
                .collect(),
        }
    }

    pub fn functionals(&self) -> Vec<FinSuppVec> {
        self.constraints.iter().map(|c| c.functional.clone()).collect()
    }

    pub fn contains(&self, u: &FinSuppVec) -> bool {
        self.constraints.iter().all(|c| c.functional.pairing(u) == c.value)
    }

    fn require_independent(&self, what: &str) -> Result<()> {
        if self.constraints.iter().any(|c| c.functional.is_zero()) {
            return Err(Error::Input(format!("{what} has a zero functional")));
        }
        if !linalg::is_independent(&self.functionals()) {
            return Err(Error::Input(format!("{what} functionals are linearly dependent")));
        }
        Ok(())
    }
}

/// `u ∈ source` with `p(T)u ∈ target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub u: FinSuppVec,
    pub poly: Poly,
    pub source: AffineCylinder,
    pub target: AffineCylinder,
    /// `f_k(u) − a_k` then `(p(T′)g_j)(u) − b_j`; all zero.
    pub residuals: Vec<Scalar>,
}

impl Witness {
    fn residuals(op: &Operator, u: &FinSuppVec, poly: &Poly, source: &AffineCylinder, target: &AffineCylinder) -> Vec<Scalar> {
        let src = source.constraints.iter().map(|c| &c.functional.pairing(u) - &c.value);
        let tgt = target
            .constraints
            .iter()
            .map(|c| &op.poly_dual_apply(poly, &c.functional).pairing(u) - &c.value);
        src.chain(tgt).collect()
    }

    pub fn check(&self, op: &Operator) -> Result<(), String> {
        let recomputed = Witness::residuals(op, &self.u, &self.poly, &self.source, &self.target);
        if recomputed != self.residuals {
            return Err("recorded residuals differ from recomputed ones".into());
        }
        match recomputed.iter().position(|r| !r.is_zero()) {
            Some(i) => Err(format!("constraint {i} has residual {}", recomputed[i])),
            None => Ok(()),
        }
    }
}

/// Evidence that no `u` satisfies the witness system: `Σ y_l·h_l = 0` but
/// `Σ y_l·c_l ≠ 0`, over the equations `h_l(u) = c_l` in source-then-target order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Infeasibility {
    pub poly: Poly,
    pub source: AffineCylinder,
    pub target: AffineCylinder,
    pub combination: Vec<Scalar>,
}

impl Infeasibility {
    pub fn check(&self, op: &Operator) -> Result<(), String> {
        let eqs = equations(op, &self.poly, &self.source, &self.target);
        if self.combination.len() != eqs.len() {
            return Err("combination length differs from the number of equations".into());
        }
        let lhs = self.combination.iter().zip(&eqs).fold(FinSuppVec::zero(), |acc, (y, (h, _))| acc.axpy(y, h));
        if !lhs.is_zero() {
            return Err(format!("Σ y_l h_l = {lhs} ≠ 0"));
        }
        let rhs = self.combination.iter().zip(&eqs).fold(Scalar::zero(op.field()), |acc, (y, (_, c))| &acc + &(y * c));
        if rhs.is_zero() {
            return Err("Σ y_l c_l = 0; no contradiction".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found(Witness),
    Infeasible(Infeasibility),
}

fn equations(op: &Operator, poly: &Poly, source: &AffineCylinder, target: &AffineCylinder) -> Vec<(FinSuppVec, Scalar)> {
    source
        .constraints
        .iter()
        .map(|c| (c.functional.clone(), c.value.clone()))
        .chain(target.constraints.iter().map(|c| (op.poly_dual_apply(poly, &c.functional), c.value.clone())))
        .collect()
}

/// Solve for `u ∈ source` with `p(T)u ∈ target`.
pub fn witness(op: &Operator, source: &AffineCylinder, target: &AffineCylinder, poly: &Poly) -> WitnessOutcome {
    enter_search("witness");
    let eqs = equations(op, poly, source, target);
    match linalg::solve(&eqs) {
        SolveOutcome::Solved(u) => {
            let residuals = Witness::residuals(op, &u, poly, source, target);
            let w = Witness { u, poly: poly.clone(), source: source.clone(), target: target.clone(), residuals };
            assert!(w.check(op).is_ok(), "internal error: witness failed re-verification");
            WitnessOutcome::Found(w)
        }
        SolveOutcome::Inconsistent(combination) => WitnessOutcome::Infeasible(Infeasibility {
            poly: poly.clone(),
            source: source.clone(),
            target: target.clone(),
            combination: linalg::dense_coefficients(&combination, eqs.len(), op.field()),
        }),
    }
}

fn span_basis<'a>(cylinders: impl IntoIterator<Item = &'a AffineCylinder>) -> Vec<FinSuppVec> {
    let all: Vec<FinSuppVec> = cylinders.into_iter().flat_map(AffineCylinder::functionals).collect();
    linalg::independent_indices(&all).into_iter().map(|i| all[i].clone()).collect()
}

/// `k = m(L)` for `L` the span of all source and target functionals: every
/// `p` with `deg p ≥ k` admits a witness. `k = 0` when `L = {0}`.
pub fn mixing_threshold(
    op: &Operator,
    source: &AffineCylinder,
    target: &AffineCylinder,
    degree_cap: usize,
) -> Result<(usize, BoundReport)> {
    enter_search("mixing_threshold");
    let report = m_of_l(op, &span_basis([source, target]), degree_cap)?;
    let k = report.m.finite().map_or(0, |m| m.max(0) as usize);
    Ok((k, report))
}

/// `T′^n g(u) = b` for every target constraint, i.e. `T^n u ∈ target`.
pub fn verify_visit(op: &Operator, u: &FinSuppVec, n: usize, target: &AffineCylinder) -> bool {
    visit_residuals(op, u, n, target).iter().all(Scalar::is_zero)
}

fn visit_residuals(op: &Operator, u: &FinSuppVec, n: usize, target: &AffineCylinder) -> Vec<Scalar> {
    let tn = Poly::monomial(Scalar::one(op.field()), n);
    target
        .constraints
        .iter()
        .map(|c| &op.poly_dual_apply(&tn, &c.functional).pairing(u) - &c.value)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Visit {
    pub power: usize,
    pub target: AffineCylinder,
}

/// `u ∈ source` and `T^{n_i} u ∈ target_i` for each visit, powers strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitSchedule {
    pub u: FinSuppVec,
    pub source: AffineCylinder,
    pub visits: Vec<Visit>,
    /// Source constraints, then each visit's constraints; all zero.
    pub residuals: Vec<Scalar>,
}

impl VisitSchedule {
    fn residuals(op: &Operator, u: &FinSuppVec, source: &AffineCylinder, visits: &[Visit]) -> Vec<Scalar> {
        let mut out = visit_residuals(op, u, 0, source);
        for v in visits {
            out.extend(visit_residuals(op, u, v.power, &v.target));
        }
        out
    }

    pub fn powers(&self) -> Vec<usize> {
        self.visits.iter().map(|v| v.power).collect()
    }

    pub fn check(&self, op: &Operator) -> Result<(), String> {
        let powers = self.powers();
        if powers.first() == Some(&0) || powers.windows(2).any(|w| w[0] >= w[1]) {
            return Err("powers must be positive and strictly increasing".into());
        }
        if !verify_visit(op, &self.u, 0, &self.source) {
            return Err("u is not in the source cylinder".into());
        }
        for (i, v) in self.visits.iter().enumerate() {
            if !verify_visit(op, &self.u, v.power, &v.target) {
                return Err(format!("T^{}u misses target {i}", v.power));
            }
        }
        if VisitSchedule::residuals(op, &self.u, &self.source, &self.visits) != self.residuals {
            return Err("recorded residuals differ from recomputed ones".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleOutcome {
    Scheduled(VisitSchedule),
    Unknown(String),
}

/// Slack added to `m` when searching for each next power.
pub const SCHEDULE_SLACK: usize = 8;

/// One `u` visiting every target in order.
///
/// Powers are chosen greedily: each is the least `n` after the previous one
/// for which the target functionals moved by `T′^n` stay linearly independent
/// of everything chosen so far, tried within `m + SCHEDULE_SLACK` steps, `m`
/// the degree bound of the span of all functionals involved.
pub fn schedule_orbit(
    op: &Operator,
    source: &AffineCylinder,
    targets: &[AffineCylinder],
    degree_cap: usize,
) -> Result<ScheduleOutcome> {
    enter_search("schedule_orbit");
    source.require_independent("source")?;
    for (i, t) in targets.iter().enumerate() {
        t.require_independent(&format!("target {i}"))?;
    }
    let m = match m_of_l(op, &span_basis(std::iter::once(source).chain(targets)), degree_cap) {
        Ok(r) => r.m.finite().unwrap_or(1).max(1) as usize,
        Err(Error::Torsion(_)) => {
            return Ok(ScheduleOutcome::Unknown("the functionals involved span torsion".into()));
        }
        Err(Error::Unknown(reason)) => return Ok(ScheduleOutcome::Unknown(reason)),
        Err(e) => return Err(e),
    };
    let budget = m + SCHEDULE_SLACK;

    let mut family = Echelon::new();
    for f in source.functionals() {
        family.insert(&f);
    }
    let mut equations: Vec<(FinSuppVec, Scalar)> =
        source.constraints.iter().map(|c| (c.functional.clone(), c.value.clone())).collect();
    let mut visits = Vec::with_capacity(targets.len());
    let mut prev = 0;
    for (i, target) in targets.iter().enumerate() {
        let mut moved = target.functionals();
        for _ in 0..prev {
            moved = moved.iter().map(|g| op.dual_apply(g)).collect();
        }
        let mut found = None;
        for n in prev + 1..=prev + budget {
            moved = moved.iter().map(|g| op.dual_apply(g)).collect();
            let mut trial = family.clone();
            if moved.iter().all(|g| trial.insert(g) == Insertion::Independent) {
                found = Some((n, trial));
                break;
            }
        }
        let Some((n, trial)) = found else {
            return Ok(ScheduleOutcome::Unknown(format!(
                "no admissible power for target {i} within {budget} steps after {prev}"
            )));
        };
        family = trial;
        equations.extend(moved.into_iter().zip(target.constraints.iter().map(|c| c.value.clone())));
        visits.push(Visit { power: n, target: target.clone() });
        prev = n;
    }
    let SolveOutcome::Solved(u) = linalg::solve(&equations) else {
        unreachable!("independent equations are consistent");
    };
    let residuals = VisitSchedule::residuals(op, &u, source, &visits);
    let schedule = VisitSchedule { u, source: source.clone(), visits, residuals };
    if let Err(e) = schedule.check(op) {
        panic!("internal error: schedule failed re-verification: {e}");
    }
    Ok(ScheduleOutcome::Scheduled(schedule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{EventuallyPeriodicSeq, Expr};

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(v, Field::Q)
    }

    fn backward() -> Operator {
        Operator::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones())).unwrap()
    }

    #[test]
    fn cube_witness() {
        let op = backward();
        let src = AffineCylinder::coordinates(Field::Q, &[(1, q(1))]);
        let tgt = AffineCylinder::coordinates(Field::Q, &[(1, q(2))]);
        let WitnessOutcome::Found(w) = witness(&op, &src, &tgt, &"t^3".parse().unwrap()) else { panic!() };
        assert_eq!(w.u, FinSuppVec::from_entries(vec![(1, q(1)), (4, q(2))]));
        assert!(w.check(&op).is_ok());
        assert_eq!(mixing_threshold(&op, &src, &tgt, 12).unwrap().0, 1);
        assert!(verify_visit(&op, &w.u, 3, &tgt));
        assert!(!verify_visit(&op, &w.u, 2, &tgt));
        assert!(verify_visit(&op, &w.u, 0, &src));
    }

    #[test]
    fn two_constraint_witness() {
        let op = backward();
        let src = AffineCylinder::coordinates(Field::Q, &[(1, q(1)), (2, q(0))]);
        let tgt = AffineCylinder::coordinates(Field::Q, &[(1, q(0)), (2, q(5))]);
        let WitnessOutcome::Found(w) = witness(&op, &src, &tgt, &"t^2".parse().unwrap()) else { panic!() };
        assert_eq!(w.u, FinSuppVec::from_entries(vec![(1, q(1)), (4, q(5))]));
        let l3 = AffineCylinder::coordinates(Field::Q, &[(1, q(0)), (2, q(0)), (3, q(0))]);
        assert_eq!(mixing_threshold(&op, &l3, &l3, 12).unwrap().0, 3);
    }

    #[test]
    fn identity_poly_conflict_is_infeasible() {
        let op = backward();
        let src = AffineCylinder::coordinates(Field::Q, &[(1, q(1))]);
        let tgt = AffineCylinder::coordinates(Field::Q, &[(1, q(2))]);
        let WitnessOutcome::Infeasible(c) = witness(&op, &src, &tgt, &Poly::one(Field::Q)) else { panic!() };
        assert!(c.check(&op).is_ok());
    }

    #[test]
    fn schedule_example() {
        let op = backward();
        let src = AffineCylinder::coordinates(Field::Q, &[(1, q(0))]);
        let targets: Vec<_> = (1..=3).map(|v| AffineCylinder::coordinates(Field::Q, &[(1, q(v))])).collect();
        let ScheduleOutcome::Scheduled(s) = schedule_orbit(&op, &src, &targets, 12).unwrap() else { panic!() };
        assert_eq!(s.powers(), vec![1, 2, 3]);
        assert_eq!(s.u, FinSuppVec::from_entries(vec![(2, q(1)), (3, q(2)), (4, q(3))]));
    }

    #[test]
    fn ball_constraint_uses_center() {
        let c: Constraint = serde_json::from_str(r#"{"functional":[[1,"1"]],"center":"3/2","radius":"1/10"}"#).unwrap();
        assert_eq!(c.value, Scalar::ratio(3, 2));
        assert!(serde_json::from_str::<Constraint>(r#"{"functional":[[1,"1"]],"center":"1","radius":"-1"}"#).is_err());
        assert!(serde_json::from_str::<Constraint>(r#"{"functional":[],"value":"1"}"#).is_err());
    }
}
