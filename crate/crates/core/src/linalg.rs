//! Exact incremental elimination over sparse vectors.
//!
//! Vectors are inserted one at a time. Each stored vector is normalized to
//! pivot coefficient 1, where its pivot is its smallest index, and has zeros
//! at the pivots of all vectors stored before it. A dependent insertion
//! yields a kernel relation over insertion ids with coefficient 1 on the new
//! vector. The insertion order fixes every pivot, so results are
//! deterministic.

use std::collections::BTreeMap;

use crate::arith::{Field, Scalar};
use crate::operators::FinSuppVec;

#[derive(Clone, Debug)]
struct Pivoted {
    vec: FinSuppVec,
    pivot: usize,
    combo: FinSuppVec,
}

/// Outcome of [`Echelon::insert`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Independent,
    /// `Σ_id k[id]·v_id = 0`, with `k[new id] = 1`.
    Dependent(FinSuppVec),
}

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Pivoted>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors inserted so far; the next insertion gets this id.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduce `v` against the stored vectors; returns the residual and the
    /// coefficients `c` with `residual = v − Σ c_id·v_id`.
    fn reduce(&self, v: &FinSuppVec, combo: FinSuppVec) -> (FinSuppVec, FinSuppVec) {
        let mut v = v.clone();
        let mut combo = combo;
        for row in &self.rows {
            if let Some(c) = v.get(row.pivot) {
                let c = -c;
                v = v.axpy(&c, &row.vec);
                combo = combo.axpy(&c, &row.combo);
            }
        }
        (v, combo)
    }

    pub fn insert(&mut self, v: &FinSuppVec) -> Insertion {
        let id = self.inserted;
        self.inserted += 1;
        let start = FinSuppVec::single(id, Scalar::one(v.field()));
        let (residual, combo) = self.reduce(v, start);
        match residual.entries().first() {
            None => Insertion::Dependent(combo),
            Some((pivot, lead)) => {
                let inv = lead.inv().expect("nonzero lead");
                let pivot = *pivot;
                self.rows.push(Pivoted { vec: residual.scale(&inv), pivot, combo: combo.scale(&inv) });
                Insertion::Independent
            }
        }
    }

    /// Whether `v` lies in the span of the stored vectors, without inserting it.
    pub fn contains(&self, v: &FinSuppVec) -> bool {
        self.reduce(v, FinSuppVec::zero()).0.is_zero()
    }

    /// Coefficients expressing `v` over the inserted vectors, if it lies in their span.
    pub fn express(&self, v: &FinSuppVec) -> Option<FinSuppVec> {
        let (residual, combo) = self.reduce(v, FinSuppVec::zero());
        residual.is_zero().then(|| combo.scale(&-Scalar::one(v.field())))
    }
}

/// Rank of a family of vectors.
pub fn rank(vectors: &[FinSuppVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

pub fn is_independent(vectors: &[FinSuppVec]) -> bool {
    rank(vectors) == vectors.len()
}

/// The kernel relation produced by the first dependent vector in order.
pub fn first_dependency(vectors: &[FinSuppVec]) -> Option<FinSuppVec> {
    let mut e = Echelon::new();
    vectors.iter().find_map(|v| match e.insert(v) {
        Insertion::Independent => None,
        Insertion::Dependent(k) => Some(k),
    })
}

/// A kernel basis of the map `c ↦ Σ c_i v_i`: one relation per dependent vector.
pub fn kernel_basis(vectors: &[FinSuppVec]) -> Vec<FinSuppVec> {
    let mut e = Echelon::new();
    vectors
        .iter()
        .filter_map(|v| match e.insert(v) {
            Insertion::Independent => None,
            Insertion::Dependent(k) => Some(k),
        })
        .collect()
}

/// Indices of a maximal linearly independent prefix-greedy subfamily.
pub fn independent_indices(vectors: &[FinSuppVec]) -> Vec<usize> {
    let mut e = Echelon::new();
    vectors
        .iter()
        .enumerate()
        .filter_map(|(i, v)| (e.insert(v) == Insertion::Independent).then_some(i))
        .collect()
}

/// `Σ c_i v_i` for a sparse coefficient vector `c` over positions in `vectors`.
/// Coefficients indexed from 0 as a dense list of length `len`; certificates
/// store them this way because [`FinSuppVec`] documents are 1-based.
pub fn dense_coefficients(coeffs: &FinSuppVec, len: usize, field: Field) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(field); len];
    for (i, c) in coeffs.iter() {
        out[*i] = c.clone();
    }
    out
}

pub fn combine(coeffs: &FinSuppVec, vectors: &[FinSuppVec]) -> FinSuppVec {
    coeffs.iter().fold(FinSuppVec::zero(), |acc, (i, c)| acc.axpy(c, &vectors[*i]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A solution supported on pivot coordinates only (free coordinates zero).
    Solved(FinSuppVec),
    /// Coefficients `y` over equation positions with `Σ y_l f_l = 0` but `Σ y_l b_l ≠ 0`.
    Inconsistent(FinSuppVec),
}

/// Solve `f_l(u) = b_l` for all equations `(f_l, b_l)`.
pub fn solve(equations: &[(FinSuppVec, Scalar)]) -> SolveOutcome {
    let mut e = Echelon::new();
    let rhs_of = |combo: &FinSuppVec| {
        combo.iter().fold(Scalar::zero(combo.field()), |acc, (l, y)| &acc + &(y * &equations[*l].1))
    };
    for (f, _) in equations {
        if let Insertion::Dependent(k) = e.insert(f) {
            if !rhs_of(&k).is_zero() {
                return SolveOutcome::Inconsistent(k);
            }
        }
    }
    // Stored rows are unit upper triangular on their pivots; back-substitute.
    let mut solution: BTreeMap<usize, Scalar> = BTreeMap::new();
    for row in e.rows.iter().rev() {
        let mut val = rhs_of(&row.combo);
        for (key, coef) in row.vec.iter() {
            if *key != row.pivot {
                if let Some(x) = solution.get(key) {
                    val = &val - &(coef * x);
                }
            }
        }
        solution.insert(row.pivot, val);
    }
    let solution = FinSuppVec::from_entries(solution.into_iter().collect());
    SolveOutcome::Solved(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;

    fn v(entries: &[(usize, i64)]) -> FinSuppVec {
        FinSuppVec::from_entries(entries.iter().map(|&(i, x)| (i, Scalar::from_i64(x, Field::Q))).collect())
    }

    #[test]
    fn dependency_relation_is_exact() {
        let cols = vec![v(&[(1, 1), (2, 1)]), v(&[(2, 1), (3, 1)]), v(&[(1, 1), (2, 2), (3, 1)])];
        let k = first_dependency(&cols).unwrap();
        assert!(combine(&k, &cols).is_zero());
        assert_eq!(k.get(2), Some(&Scalar::one(Field::Q)));
        assert_eq!(rank(&cols), 2);
        assert_eq!(independent_indices(&cols), vec![0, 1]);
    }

    #[test]
    fn zero_vector_is_dependent() {
        let mut e = Echelon::new();
        assert_eq!(e.insert(&FinSuppVec::zero()), Insertion::Dependent(FinSuppVec::basis(0, Field::Q)));
    }

    #[test]
    fn solve_sets_free_coordinates_to_zero() {
        // u1 + u2 = 3, u2 + u3 = 5.
        let eqs = vec![
            (v(&[(1, 1), (2, 1)]), Scalar::from_i64(3, Field::Q)),
            (v(&[(2, 1), (3, 1)]), Scalar::from_i64(5, Field::Q)),
        ];
        match solve(&eqs) {
            SolveOutcome::Solved(u) => {
                assert_eq!(u, v(&[(1, -2), (2, 5)]));
                for (f, b) in &eqs {
                    assert_eq!(&f.pairing(&u), b);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let eqs = vec![
            (v(&[(1, 1)]), Scalar::from_i64(1, Field::Q)),
            (v(&[(1, 1)]), Scalar::from_i64(2, Field::Q)),
        ];
        let SolveOutcome::Inconsistent(y) = solve(&eqs) else { panic!() };
        let fs: Vec<_> = eqs.iter().map(|e| e.0.clone()).collect();
        assert!(combine(&y, &fs).is_zero());
    }

    #[test]
    fn express_recovers_coefficients() {
        let mut e = Echelon::new();
        let a = v(&[(1, 1), (2, 1)]);
        let b = v(&[(2, 1)]);
        e.insert(&a);
        e.insert(&b);
        let c = e.express(&v(&[(1, 2), (2, 5)])).unwrap();
        assert_eq!(combine(&c, &[a, b]), v(&[(1, 2), (2, 5)]));
        assert!(e.express(&v(&[(3, 1)])).is_none());
    }
}
