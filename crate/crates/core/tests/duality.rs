//! The dual action against a direct evaluation of `T·u` from the grammar.
//!
//! The oracle below applies each constructor to a finitely supported `u`
//! by its defining formula on sequences, never touching matrix rows, so
//! `⟨T′f, u⟩ = ⟨f, Tu⟩` checks the row machinery independently.

use std::collections::BTreeMap;

use proptest::collection::vec;
use proptest::prelude::*;
use weakmix_core::operators::{BandDiagonal, EventuallyPeriodicSeq, Expr};
use weakmix_core::{Field, FinSuppVec, Operator, Poly, Scalar};

type Seq = BTreeMap<usize, Scalar>;

fn add_at(out: &mut Seq, n: usize, v: Scalar) {
    let cur = out.remove(&n).unwrap_or_else(|| Scalar::zero(Field::Q));
    let s = &cur + &v;
    if !s.is_zero() {
        out.insert(n, s);
    }
}

fn apply(expr: &Expr, u: &Seq) -> Seq {
    let mut out = Seq::new();
    match expr {
        Expr::BackwardShift { weights } => {
            for (&m, v) in u {
                if m >= 2 {
                    add_at(&mut out, m - 1, weights.entry(m - 1) * v);
                }
            }
        }
        Expr::ForwardShift { weights } => {
            for (&m, v) in u {
                add_at(&mut out, m + 1, weights.entry(m) * v);
            }
        }
        Expr::Diagonal { entries } => {
            for (&m, v) in u {
                add_at(&mut out, m, entries.entry(m) * v);
            }
        }
        Expr::Banded { diagonals } => {
            for d in diagonals {
                for (&m, v) in u {
                    let n = m as i64 - d.offset;
                    if n >= 1 {
                        add_at(&mut out, n as usize, d.entries.entry(n as usize) * v);
                    }
                }
            }
        }
        Expr::FiniteBlock { matrix, tail } => {
            let k = matrix.len();
            for (i, row) in matrix.iter().enumerate() {
                for (j, a) in row.iter().enumerate() {
                    if let Some(v) = u.get(&(j + 1)) {
                        add_at(&mut out, i + 1, a * v);
                    }
                }
            }
            let shifted: Seq = u.iter().filter(|(m, _)| **m > k).map(|(m, v)| (m - k, v.clone())).collect();
            for (m, v) in apply(tail, &shifted) {
                add_at(&mut out, m + k, v);
            }
        }
        Expr::Sum { terms } => {
            for t in terms {
                for (m, v) in apply(t, u) {
                    add_at(&mut out, m, v);
                }
            }
        }
        Expr::Scale { scalar, op } => {
            for (m, v) in apply(op, u) {
                add_at(&mut out, m, scalar * &v);
            }
        }
        Expr::Compose { factors } => {
            let mut cur = u.clone();
            for f in factors.iter().rev() {
                cur = apply(f, &cur);
            }
            out = cur;
        }
        Expr::Poly { coeffs, op } => {
            let mut power = u.clone();
            for (i, c) in coeffs.iter().enumerate() {
                if i > 0 {
                    power = apply(op, &power);
                }
                for (m, v) in &power {
                    add_at(&mut out, *m, c * v);
                }
            }
        }
        Expr::DirectSum { parts } => {
            let r = parts.len();
            for (j, part) in parts.iter().enumerate() {
                let local: Seq = u
                    .iter()
                    .filter(|(m, _)| (**m - 1) % r == j)
                    .map(|(m, v)| ((m - 1) / r + 1, v.clone()))
                    .collect();
                for (l, v) in apply(part, &local) {
                    add_at(&mut out, (l - 1) * r + j + 1, v);
                }
            }
        }
    }
    out
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, 1i64..=3).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn seq() -> impl Strategy<Value = EventuallyPeriodicSeq> {
    (vec(scalar(), 0..3), vec(scalar(), 1..3)).prop_map(|(head, period)| EventuallyPeriodicSeq { head, period })
}

fn square(k: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    vec(vec(scalar(), k), k)
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        seq().prop_map(Expr::backward_shift),
        seq().prop_map(Expr::forward_shift),
        seq().prop_map(Expr::diagonal),
        vec((-2i64..=2, seq()), 1..3).prop_map(|ds| {
            let unique: BTreeMap<i64, EventuallyPeriodicSeq> = ds.into_iter().collect();
            Expr::Banded {
                diagonals: unique.into_iter().map(|(offset, entries)| BandDiagonal { offset, entries }).collect(),
            }
        }),
        (1usize..=3)
            .prop_flat_map(square)
            .prop_map(|m| Expr::finite_block(m, Expr::backward_shift(EventuallyPeriodicSeq::ones()))),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            vec(inner.clone(), 1..3).prop_map(|terms| Expr::Sum { terms }),
            (scalar(), inner.clone()).prop_map(|(scalar, op)| Expr::Scale { scalar, op: Box::new(op) }),
            vec(inner.clone(), 1..3).prop_map(Expr::compose),
            (vec(scalar(), 1..4), inner.clone()).prop_map(|(coeffs, op)| Expr::Poly { coeffs, op: Box::new(op) }),
            vec(inner.clone(), 1..3).prop_map(Expr::direct_sum),
            ((1usize..=2).prop_flat_map(square), inner).prop_map(|(m, tail)| Expr::finite_block(m, tail)),
        ]
    })
}

fn finsupp() -> impl Strategy<Value = FinSuppVec> {
    vec((1usize..=10, nonzero_scalar()), 0..5).prop_map(FinSuppVec::from_entries)
}

fn to_seq(v: &FinSuppVec) -> Seq {
    v.iter().cloned().collect()
}

fn pair_seq(f: &FinSuppVec, u: &Seq) -> Scalar {
    f.iter().fold(Scalar::zero(Field::Q), |acc, (n, c)| match u.get(n) {
        Some(v) => &acc + &(c * v),
        None => acc,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dual_action_matches_direct_evaluation(e in expr(), f in finsupp(), u in finsupp()) {
        let op = Operator::new(Field::Q, e.clone()).unwrap();
        let lhs = op.dual_apply(&f).pairing(&u);
        let rhs = pair_seq(&f, &apply(&e, &to_seq(&u)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_action_is_linear(e in expr(), f in finsupp(), g in finsupp(), a in scalar(), b in scalar()) {
        let op = Operator::new(Field::Q, e).unwrap();
        let lhs = op.dual_apply(&f.scale(&a).add(&g.scale(&b)));
        let rhs = op.dual_apply(&f).scale(&a).add(&op.dual_apply(&g).scale(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polynomial_action_is_multiplicative(
        e in expr(),
        f in finsupp(),
        p in vec(scalar(), 0..4),
        q in vec(scalar(), 0..4),
    ) {
        let op = Operator::new(Field::Q, e).unwrap();
        let (p, q) = (Poly::new(Field::Q, p), Poly::new(Field::Q, q));
        let lhs = op.poly_dual_apply(&(&p * &q), &f);
        let rhs = op.poly_dual_apply(&p, &op.poly_dual_apply(&q, &f));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn direct_sum_interleaves(a in leaf(), b in leaf(), f in finsupp()) {
        let sum = Operator::new(Field::Q, Expr::direct_sum(vec![a.clone(), b.clone()])).unwrap();
        let parts = [Operator::new(Field::Q, a).unwrap(), Operator::new(Field::Q, b).unwrap()];
        for (j, part) in parts.iter().enumerate() {
            let embed = |l: usize| 2 * (l - 1) + j + 1;
            prop_assert_eq!(sum.dual_apply(&f.map_indices(embed)), part.dual_apply(&f).map_indices(embed));
        }
    }

    #[test]
    fn rows_are_finite_and_lazy(e in expr(), n in 1usize..40) {
        let op = Operator::new(Field::Q, e).unwrap();
        let row = op.row(n);
        prop_assert!(row.entries().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(row.iter().all(|(_, v)| !v.is_zero()));
    }
}

fn e(n: usize) -> FinSuppVec {
    FinSuppVec::basis(n, Field::Q)
}

#[test]
fn row_examples() {
    let bs = Operator::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones())).unwrap();
    assert_eq!(*bs.row(1), e(2));
    let diag = Operator::new(
        Field::Q,
        Expr::diagonal(EventuallyPeriodicSeq::periodic((1..=3).map(|v| Scalar::from_i64(v, Field::Q)).collect())),
    )
    .unwrap();
    assert_eq!(*diag.row(2), e(2).scale(&Scalar::from_i64(2, Field::Q)));
    let bs2 = Operator::new(
        Field::Q,
        Expr::compose(vec![
            Expr::backward_shift(EventuallyPeriodicSeq::ones()),
            Expr::backward_shift(EventuallyPeriodicSeq::ones()),
        ]),
    )
    .unwrap();
    assert_eq!(*bs2.row(1), e(3));
    let one = Scalar::one(Field::Q);
    let banded = Operator::new(Field::Q, Expr::banded_constant(&[(1, one.clone()), (2, one.clone())])).unwrap();
    assert_eq!(*banded.row(4), e(5).add(&e(6)));
    let block = Operator::new(
        Field::Q,
        Expr::finite_block(vec![vec![one.clone(), one.clone()], vec![one.clone(), one]], Expr::backward_shift(EventuallyPeriodicSeq::ones())),
    )
    .unwrap();
    assert_eq!(block.row(1).support().collect::<Vec<_>>(), vec![1, 2]);
}

#[test]
fn dual_examples() {
    let bs = Operator::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones())).unwrap();
    let fs = Operator::new(Field::Q, Expr::forward_shift(EventuallyPeriodicSeq::ones())).unwrap();
    let three = Scalar::from_i64(3, Field::Q);
    let diag = Operator::new(Field::Q, Expr::diagonal(EventuallyPeriodicSeq::constant(three.clone()))).unwrap();
    assert_eq!(bs.dual_apply(&e(1)), e(2));
    assert!(fs.dual_apply(&e(1)).is_zero());
    assert_eq!(diag.dual_apply(&e(1)), e(1).scale(&three));
    assert_eq!(bs.poly_dual_apply(&Poly::one(Field::Q), &e(5)), e(5));
    assert_eq!(bs.poly_dual_apply(&"t^2".parse().unwrap(), &e(1)), e(3));
    assert!(diag.poly_dual_apply(&"t - 3".parse().unwrap(), &e(1)).is_zero());
}

#[test]
fn gaussian_operator_pairs_exactly() {
    let i: Scalar = "i".parse().unwrap();
    let op = Operator::new(Field::Qi, Expr::diagonal(EventuallyPeriodicSeq::constant(i.clone()))).unwrap();
    let f = FinSuppVec::basis(2, Field::Qi);
    assert_eq!(op.poly_dual_apply(&"t^2 + 1".parse::<Poly>().unwrap(), &f), FinSuppVec::zero());
    assert_eq!(op.dual_apply(&f).pairing(&FinSuppVec::basis(2, Field::Qi)), i);
}
