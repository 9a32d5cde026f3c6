//! Matrix realization of the operator grammar and the dual action on `φ`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::doc::{EventuallyPeriodicSeq, Expr, OperatorDoc};
use super::finsupp::FinSuppVec;
use crate::arith::{Field, Poly, Scalar};
use crate::error::ParseError;

enum Kind {
    Backward(EventuallyPeriodicSeq),
    Forward(EventuallyPeriodicSeq),
    Diagonal(EventuallyPeriodicSeq),
    Banded(Vec<(i64, EventuallyPeriodicSeq)>),
    Block(Vec<Vec<Scalar>>, Box<Node>),
    Sum(Vec<Node>),
    Scale(Scalar, Box<Node>),
    Compose(Vec<Node>),
    Poly(Vec<Scalar>, Box<Node>),
    DirectSum(Vec<Node>),
}

struct Node {
    kind: Kind,
    field: Field,
    rows: Mutex<HashMap<usize, Arc<FinSuppVec>>>,
}

impl Node {
    fn compile(expr: &Expr, field: Field) -> Node {
        let boxed = |e: &Expr| Box::new(Node::compile(e, field));
        let all = |v: &[Expr]| v.iter().map(|e| Node::compile(e, field)).collect();
        let kind = match expr {
            Expr::BackwardShift { weights } => Kind::Backward(weights.clone()),
            Expr::ForwardShift { weights } => Kind::Forward(weights.clone()),
            Expr::Diagonal { entries } => Kind::Diagonal(entries.clone()),
            Expr::Banded { diagonals } => {
                Kind::Banded(diagonals.iter().map(|d| (d.offset, d.entries.clone())).collect())
            }
            Expr::FiniteBlock { matrix, tail } => Kind::Block(matrix.clone(), boxed(tail)),
            Expr::Sum { terms } => Kind::Sum(all(terms)),
            Expr::Scale { scalar, op } => Kind::Scale(scalar.clone(), boxed(op)),
            Expr::Compose { factors } => Kind::Compose(all(factors)),
            Expr::Poly { coeffs, op } => Kind::Poly(coeffs.clone(), boxed(op)),
            Expr::DirectSum { parts } => Kind::DirectSum(all(parts)),
        };
        Node { kind, field, rows: Mutex::new(HashMap::new()) }
    }

    fn row(&self, n: usize) -> Arc<FinSuppVec> {
        if let Some(hit) = self.rows.lock().expect("row cache poisoned").get(&n) {
            return Arc::clone(hit);
        }
        let row = Arc::new(self.compute_row(n));
        self.rows.lock().expect("row cache poisoned").insert(n, Arc::clone(&row));
        row
    }

    /// `Σ_k v_k · row_k`, i.e. the row vector `v` times this matrix.
    fn left_mul(&self, v: &FinSuppVec) -> FinSuppVec {
        v.iter().fold(FinSuppVec::zero(), |acc, (k, c)| acc.axpy(c, &self.row(*k)))
    }

    fn compute_row(&self, n: usize) -> FinSuppVec {
        match &self.kind {
            Kind::Backward(w) => FinSuppVec::single(n + 1, w.entry(n).clone()),
            Kind::Forward(_) if n == 1 => FinSuppVec::zero(),
            Kind::Forward(w) => FinSuppVec::single(n - 1, w.entry(n - 1).clone()),
            Kind::Diagonal(d) => FinSuppVec::single(n, d.entry(n).clone()),
            Kind::Banded(diags) => FinSuppVec::from_entries(
                diags
                    .iter()
                    .filter_map(|(o, e)| {
                        let col = n as i64 + o;
                        (col >= 1).then(|| (col as usize, e.entry(n).clone()))
                    })
                    .collect(),
            ),
            Kind::Block(matrix, tail) => {
                let k = matrix.len();
                if n <= k {
                    FinSuppVec::from_entries(
                        matrix[n - 1].iter().enumerate().map(|(j, v)| (j + 1, v.clone())).collect(),
                    )
                } else {
                    tail.row(n - k).map_indices(|j| j + k)
                }
            }
            Kind::Sum(terms) => terms.iter().fold(FinSuppVec::zero(), |acc, t| acc.add(&t.row(n))),
            Kind::Scale(c, op) => op.row(n).scale(c),
            Kind::Compose(factors) => {
                let mut v = (*factors[0].row(n)).clone();
                for f in &factors[1..] {
                    v = f.left_mul(&v);
                }
                v
            }
            Kind::Poly(coeffs, op) => {
                let mut power = FinSuppVec::basis(n, self.field);
                let mut acc = power.scale(&coeffs[0]);
                for c in &coeffs[1..] {
                    power = op.left_mul(&power);
                    acc = acc.axpy(c, &power);
                }
                acc
            }
            Kind::DirectSum(parts) => {
                let r = parts.len();
                let j = (n - 1) % r;
                let local = (n - 1) / r + 1;
                parts[j].row(local).map_indices(|l| (l - 1) * r + j + 1)
            }
        }
    }
}

/// A validated, compiled row-finite operator `T` on `ω`.
///
/// Rows are computed lazily and memoized; the cache is internal and the
/// operator is safe to share across threads.
pub struct Operator {
    doc: OperatorDoc,
    root: Node,
}

impl std::fmt::Debug for Operator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Operator").field("doc", &self.doc).finish()
    }
}

impl Clone for Operator {
    fn clone(&self) -> Self {
        Operator::from_doc(self.doc.clone()).expect("already validated")
    }
}

impl Operator {
    pub fn from_doc(doc: OperatorDoc) -> Result<Operator, ParseError> {
        doc.validate()?;
        let promoted = doc.op.promote(doc.field);
        let root = Node::compile(&promoted, doc.field);
        Ok(Operator { doc, root })
    }

    pub fn new(field: Field, op: Expr) -> Result<Operator, ParseError> {
        Operator::from_doc(OperatorDoc::new(field, op))
    }

    pub fn parse(text: &str) -> Result<Operator, ParseError> {
        Operator::from_doc(super::doc::parse_operator(text)?)
    }

    pub fn doc(&self) -> &OperatorDoc {
        &self.doc
    }

    pub fn field(&self) -> Field {
        self.doc.field
    }

    /// Row `n ≥ 1` of the matrix of `T`.
    pub fn row(&self, n: usize) -> Arc<FinSuppVec> {
        assert!(n >= 1, "operator rows are 1-based");
        self.root.row(n)
    }

    /// `(T′f)_n = Σ_k f_k·T[k, n]`.
    pub fn dual_apply(&self, f: &FinSuppVec) -> FinSuppVec {
        self.root.left_mul(f)
    }

    /// `p(T′)f` by Horner's rule.
    pub fn poly_dual_apply(&self, p: &Poly, f: &FinSuppVec) -> FinSuppVec {
        let mut acc = FinSuppVec::zero();
        for c in p.coeffs().iter().rev() {
            acc = self.dual_apply(&acc).axpy(c, f);
        }
        acc
    }

    /// `[f, T′f, …, T′^k f]`.
    pub fn krylov(&self, f: &FinSuppVec, k: usize) -> Vec<FinSuppVec> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(f.clone());
        for i in 0..k {
            let next = self.dual_apply(&out[i]);
            out.push(next);
        }
        out
    }
}

pub fn row(op: &Operator, n: usize) -> FinSuppVec {
    (*op.row(n)).clone()
}

pub fn dual_apply(op: &Operator, f: &FinSuppVec) -> FinSuppVec {
    op.dual_apply(f)
}

pub fn poly_dual_apply(op: &Operator, p: &Poly, f: &FinSuppVec) -> FinSuppVec {
    op.poly_dual_apply(p, f)
}
