//! Invariants of the relation search, the J-map, the degree bounds and the
//! witness solver on random instances.

use proptest::collection::vec;
use proptest::prelude::*;
use weakmix_core::bounds::{brute_intersection, m_of_l, MValue};
use weakmix_core::certificate::Certificate;
use weakmix_core::operators::{EventuallyPeriodicSeq, Expr};
use weakmix_core::relations::{classify, find_relation, torsion_in_span, ClassifyVerdict, TorsionOutcome};
use weakmix_core::structure::{linearity_check, verify_intertwine};
use weakmix_core::witness::{verify_visit, witness, AffineCylinder, WitnessOutcome};
use weakmix_core::{Field, FinSuppVec, Operator, Poly, Scalar};

fn q(v: i64) -> Scalar {
    Scalar::from_i64(v, Field::Q)
}

fn small() -> impl Strategy<Value = Scalar> {
    (-3i64..=3).prop_map(q)
}

fn functional(max_index: usize) -> impl Strategy<Value = FinSuppVec> {
    vec((1..=max_index, small()), 1..4)
        .prop_map(FinSuppVec::from_entries)
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn backward() -> Operator {
    Operator::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones())).unwrap()
}

fn banded() -> Operator {
    Operator::new(Field::Q, Expr::banded_constant(&[(1, q(1)), (2, q(1))])).unwrap()
}

fn family() -> impl Strategy<Value = Operator> {
    prop_oneof![
        Just(backward()),
        Just(banded()),
        Just(Operator::new(Field::Q, Expr::forward_shift(EventuallyPeriodicSeq::ones())).unwrap()),
        vec(-2i64..=2, 1..3).prop_map(|d| {
            let entries = d.into_iter().map(q).collect();
            Operator::new(Field::Q, Expr::diagonal(EventuallyPeriodicSeq::periodic(entries))).unwrap()
        }),
    ]
}

fn block_operator(k: usize) -> impl Strategy<Value = Operator> {
    vec(vec(small(), k), k).prop_map(|m| {
        Operator::new(Field::Q, Expr::finite_block(m, Expr::backward_shift(EventuallyPeriodicSeq::ones()))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn found_relations_verify(op in family(), xs in vec(functional(6), 1..4), cap in 0usize..5) {
        if let Some(s) = find_relation(&op, &xs, cap) {
            prop_assert!(s.check(&op).is_ok());
            let cert = Certificate::Syzygy { operator: op.doc().clone(), syzygy: s };
            prop_assert!(cert.verify().is_ok());
        }
    }

    #[test]
    fn relation_search_is_monotone(op in family(), xs in vec(functional(6), 1..4), cap in 0usize..6) {
        if find_relation(&op, &xs, cap).is_none() {
            for lower in 0..cap {
                prop_assert!(find_relation(&op, &xs, lower).is_none());
            }
        } else {
            prop_assert!(find_relation(&op, &xs, cap + 1).is_some());
        }
    }

    #[test]
    fn search_is_deterministic(op in family(), xs in vec(functional(6), 1..4)) {
        prop_assert_eq!(torsion_in_span(&op, &xs, 6), torsion_in_span(&op, &xs, 6));
    }

    #[test]
    fn torsion_outcomes_verify(op in family(), xs in vec(functional(5), 1..4)) {
        let doc = op.doc().clone();
        match torsion_in_span(&op, &xs, 6) {
            TorsionOutcome::Torsion(certificate) => {
                let cert = Certificate::Torsion { operator: doc, certificate };
                prop_assert!(cert.verify().is_ok());
            }
            TorsionOutcome::NoTorsion(report) => {
                let cert = Certificate::NoTorsion { operator: doc, report };
                prop_assert!(cert.verify().is_ok());
            }
            TorsionOutcome::Unknown(_) => {}
        }
    }

    #[test]
    fn finite_blocks_are_not_transitive(op in (1usize..=3).prop_flat_map(block_operator)) {
        let verdict = classify(&op, 3, 3);
        prop_assert!(matches!(verdict, ClassifyVerdict::NotTransitive { .. }), "{:?}", verdict);
        prop_assert!(verdict.check(&op).is_ok());
    }

    #[test]
    fn direct_sum_inherits_absence_of_torsion(which in 0usize..2, s in 1usize..4) {
        let part = if which == 0 {
            Expr::backward_shift(EventuallyPeriodicSeq::ones())
        } else {
            Expr::banded_constant(&[(1, q(1)), (2, q(1))])
        };
        let single = Operator::new(Field::Q, part.clone()).unwrap();
        let doubled = Operator::new(Field::Q, Expr::direct_sum(vec![part.clone(), part])).unwrap();
        let gens: Vec<FinSuppVec> = (1..=s).map(|n| FinSuppVec::basis(n, Field::Q)).collect();
        let interleaved: Vec<FinSuppVec> = (1..=2 * s).map(|n| FinSuppVec::basis(n, Field::Q)).collect();
        prop_assert!(matches!(torsion_in_span(&single, &gens, 6), TorsionOutcome::NoTorsion(_)));
        prop_assert!(matches!(torsion_in_span(&doubled, &interleaved, 6), TorsionOutcome::NoTorsion(_)));
    }

    #[test]
    fn j_map_intertwines_and_is_linear(
        x in functional(6),
        y in functional(6),
        a in small(),
        b in small(),
        use_banded in any::<bool>(),
    ) {
        let (op, basis) = if use_banded {
            (banded(), vec![FinSuppVec::basis(1, Field::Q), FinSuppVec::basis(2, Field::Q)])
        } else {
            (backward(), vec![FinSuppVec::basis(1, Field::Q)])
        };
        prop_assert!(verify_intertwine(&op, &basis, &x, 12).unwrap());
        prop_assert!(linearity_check(&op, &basis, (&x, &y), (&a, &b), 12).unwrap());
    }

    #[test]
    fn bound_clears_every_higher_degree(
        l in vec(functional(5), 1..4),
        tail in vec(small(), 0..3),
        lead in (1i64..=3).prop_map(q),
    ) {
        let op = backward();
        let basis: Vec<FinSuppVec> = weakmix_core::linalg::independent_indices(&l).into_iter().map(|i| l[i].clone()).collect();
        let report = m_of_l(&op, &basis, 12).unwrap();
        let MValue::Finite(m) = report.m else { panic!("nonempty L") };
        prop_assert!(m >= 1);
        prop_assert!(report.check(&op).is_ok());
        let mut coeffs = tail;
        coeffs.resize(m as usize, q(0));
        coeffs.push(lead);
        let p = Poly::new(Field::Q, coeffs);
        prop_assert!(brute_intersection(&op, &basis, &p).is_empty());
    }

    #[test]
    fn witnesses_land_in_targets(
        src in vec((1usize..=6, small()), 1..4),
        tgt in vec((1usize..=6, small()), 1..4),
        extra in 0usize..4,
    ) {
        let op = backward();
        let dedup = |v: Vec<(usize, Scalar)>| {
            let m: std::collections::BTreeMap<usize, Scalar> = v.into_iter().collect();
            m.into_iter().collect::<Vec<_>>()
        };
        let source = AffineCylinder::coordinates(Field::Q, &dedup(src));
        let target = AffineCylinder::coordinates(Field::Q, &dedup(tgt));
        let n = 6 + extra;
        let p = Poly::monomial(q(1), n);
        let WitnessOutcome::Found(w) = witness(&op, &source, &target, &p) else {
            panic!("coordinate cylinders are always reachable after 6 steps");
        };
        prop_assert!(source.contains(&w.u));
        prop_assert!(verify_visit(&op, &w.u, n, &target));
    }

    #[test]
    fn certificates_survive_serialization(op in family(), s in 1usize..4) {
        let cert = Certificate::Classify { operator: op.doc().clone(), verdict: classify(&op, s, 4) };
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(back.verify().is_ok());
    }
}

#[test]
fn tampered_no_torsion_report_is_rejected() {
    let op = backward();
    let gens: Vec<FinSuppVec> = (1..=3).map(|n| FinSuppVec::basis(n, Field::Q)).collect();
    let TorsionOutcome::NoTorsion(mut report) = torsion_in_span(&op, &gens, 6) else { panic!() };
    report.independence_cap = 0;
    let err = Certificate::NoTorsion { operator: op.doc().clone(), report }.verify().unwrap_err();
    assert!(err.reason.contains("independence cap"), "{err}");
}

#[test]
#[should_panic(expected = "searches are forbidden")]
fn search_inside_verification_panics() {
    let _lock = weakmix_core::guard::forbid_search();
    let _ = classify(&backward(), 1, 1);
}
