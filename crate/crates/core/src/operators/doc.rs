//! The JSON operator grammar and its validation.

use serde::{Deserialize, Serialize};

use crate::arith::{Field, Scalar};
use crate::error::ParseError;

/// `entry(n) = head[n]` for `n ≤ |head|`, else `period[(n − |head| − 1) mod |period|]` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventuallyPeriodicSeq {
    #[serde(default)]
    pub head: Vec<Scalar>,
    pub period: Vec<Scalar>,
}

impl EventuallyPeriodicSeq {
    pub fn constant(c: Scalar) -> Self {
        EventuallyPeriodicSeq { head: Vec::new(), period: vec![c] }
    }

    pub fn ones() -> Self {
        Self::constant(Scalar::one(Field::Q))
    }

    pub fn periodic(period: Vec<Scalar>) -> Self {
        EventuallyPeriodicSeq { head: Vec::new(), period }
    }

    /// Panics on `n == 0` or an empty period; validated documents have neither.
    pub fn entry(&self, n: usize) -> &Scalar {
        assert!(n >= 1, "sequence indices are 1-based");
        if n <= self.head.len() {
            &self.head[n - 1]
        } else {
            &self.period[(n - self.head.len() - 1) % self.period.len()]
        }
    }

    fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.head.iter().chain(self.period.iter())
    }

    fn promote(&self, field: Field) -> Self {
        EventuallyPeriodicSeq {
            head: self.head.iter().map(|s| s.promote(field)).collect(),
            period: self.period.iter().map(|s| s.promote(field)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandDiagonal {
    pub offset: i64,
    pub entries: EventuallyPeriodicSeq,
}

/// Expression tree of a row-finite operator on `ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expr {
    /// `(Tx)_n = w_n·x_{n+1}`.
    BackwardShift { weights: EventuallyPeriodicSeq },
    /// `(Tx)_1 = 0`, `(Tx)_{n+1} = w_n·x_n`.
    ForwardShift { weights: EventuallyPeriodicSeq },
    Diagonal { entries: EventuallyPeriodicSeq },
    /// `T[n, n+o] = entries_o(n)`, absent when `n + o < 1`.
    Banded { diagonals: Vec<BandDiagonal> },
    /// The square block acts on the first `k` coordinates, `tail` on the rest.
    FiniteBlock { matrix: Vec<Vec<Scalar>>, tail: Box<Expr> },
    Sum { terms: Vec<Expr> },
    Scale { scalar: Scalar, op: Box<Expr> },
    /// `factors[0] ∘ factors[1] ∘ …`.
    Compose { factors: Vec<Expr> },
    /// `Σ_i coeffs[i]·op^i`.
    Poly { coeffs: Vec<Scalar>, op: Box<Expr> },
    /// Part `j` of `r` (1-based) owns the indices `≡ j (mod r)`.
    DirectSum { parts: Vec<Expr> },
}

impl Expr {
    pub fn backward_shift(weights: EventuallyPeriodicSeq) -> Expr {
        Expr::BackwardShift { weights }
    }

    pub fn forward_shift(weights: EventuallyPeriodicSeq) -> Expr {
        Expr::ForwardShift { weights }
    }

    pub fn diagonal(entries: EventuallyPeriodicSeq) -> Expr {
        Expr::Diagonal { entries }
    }

    /// Banded operator with constant diagonals `(offset, value)`.
    pub fn banded_constant(diagonals: &[(i64, Scalar)]) -> Expr {
        Expr::Banded {
            diagonals: diagonals
                .iter()
                .map(|(offset, v)| BandDiagonal { offset: *offset, entries: EventuallyPeriodicSeq::constant(v.clone()) })
                .collect(),
        }
    }

    pub fn finite_block(matrix: Vec<Vec<Scalar>>, tail: Expr) -> Expr {
        Expr::FiniteBlock { matrix, tail: Box::new(tail) }
    }

    pub fn direct_sum(parts: Vec<Expr>) -> Expr {
        Expr::DirectSum { parts }
    }

    pub fn compose(factors: Vec<Expr>) -> Expr {
        Expr::Compose { factors }
    }

    fn validate(&self, field: Field, path: &str) -> Result<(), ParseError> {
        let scalar = |s: &Scalar, p: String| -> Result<(), ParseError> {
            if s.field().join(field) != field {
                return Err(ParseError::new(p, format!("scalar `{s}` is not in field {field}")));
            }
            Ok(())
        };
        let seq = |s: &EventuallyPeriodicSeq, p: String| -> Result<(), ParseError> {
            if s.period.is_empty() {
                return Err(ParseError::new(format!("{p}.period"), "period must be non-empty"));
            }
            for (i, v) in s.scalars().enumerate() {
                scalar(v, format!("{p}[{i}]"))?;
            }
            Ok(())
        };
        let nonempty = |len: usize, p: String, what: &str| -> Result<(), ParseError> {
            if len == 0 {
                return Err(ParseError::new(p, format!("{what} must be non-empty")));
            }
            Ok(())
        };
        match self {
            Expr::BackwardShift { weights } | Expr::ForwardShift { weights } => seq(weights, format!("{path}.weights")),
            Expr::Diagonal { entries } => seq(entries, format!("{path}.entries")),
            Expr::Banded { diagonals } => {
                nonempty(diagonals.len(), format!("{path}.diagonals"), "diagonals")?;
                let mut seen = std::collections::BTreeSet::new();
                for (i, d) in diagonals.iter().enumerate() {
                    let p = format!("{path}.diagonals[{i}]");
                    if !seen.insert(d.offset) {
                        return Err(ParseError::new(format!("{p}.offset"), format!("duplicate offset {}", d.offset)));
                    }
                    seq(&d.entries, format!("{p}.entries"))?;
                }
                Ok(())
            }
            Expr::FiniteBlock { matrix, tail } => {
                let p = format!("{path}.matrix");
                nonempty(matrix.len(), p.clone(), "matrix")?;
                for (i, row) in matrix.iter().enumerate() {
                    if row.len() != matrix.len() {
                        return Err(ParseError::new(
                            format!("{p}[{i}]"),
                            format!("matrix must be square: row has {} entries, expected {}", row.len(), matrix.len()),
                        ));
                    }
                    for (j, v) in row.iter().enumerate() {
                        scalar(v, format!("{p}[{i}][{j}]"))?;
                    }
                }
                tail.validate(field, &format!("{path}.tail"))
            }
            Expr::Sum { terms } => {
                nonempty(terms.len(), format!("{path}.terms"), "terms")?;
                terms.iter().enumerate().try_for_each(|(i, t)| t.validate(field, &format!("{path}.terms[{i}]")))
            }
            Expr::Scale { scalar: s, op } => {
                scalar(s, format!("{path}.scalar"))?;
                op.validate(field, &format!("{path}.op"))
            }
            Expr::Compose { factors } => {
                nonempty(factors.len(), format!("{path}.factors"), "factors")?;
                factors.iter().enumerate().try_for_each(|(i, t)| t.validate(field, &format!("{path}.factors[{i}]")))
            }
            Expr::Poly { coeffs, op } => {
                nonempty(coeffs.len(), format!("{path}.coeffs"), "coeffs")?;
                for (i, c) in coeffs.iter().enumerate() {
                    scalar(c, format!("{path}.coeffs[{i}]"))?;
                }
                op.validate(field, &format!("{path}.op"))
            }
            Expr::DirectSum { parts } => {
                nonempty(parts.len(), format!("{path}.parts"), "parts")?;
                parts.iter().enumerate().try_for_each(|(i, t)| t.validate(field, &format!("{path}.parts[{i}]")))
            }
        }
    }

    /// Re-tag every scalar into `field`.
    pub(crate) fn promote(&self, field: Field) -> Expr {
        let boxed = |e: &Expr| Box::new(e.promote(field));
        let all = |v: &[Expr]| v.iter().map(|e| e.promote(field)).collect();
        match self {
            Expr::BackwardShift { weights } => Expr::BackwardShift { weights: weights.promote(field) },
            Expr::ForwardShift { weights } => Expr::ForwardShift { weights: weights.promote(field) },
            Expr::Diagonal { entries } => Expr::Diagonal { entries: entries.promote(field) },
            Expr::Banded { diagonals } => Expr::Banded {
                diagonals: diagonals
                    .iter()
                    .map(|d| BandDiagonal { offset: d.offset, entries: d.entries.promote(field) })
                    .collect(),
            },
            Expr::FiniteBlock { matrix, tail } => Expr::FiniteBlock {
                matrix: matrix.iter().map(|r| r.iter().map(|s| s.promote(field)).collect()).collect(),
                tail: boxed(tail),
            },
            Expr::Sum { terms } => Expr::Sum { terms: all(terms) },
            Expr::Scale { scalar, op } => Expr::Scale { scalar: scalar.promote(field), op: boxed(op) },
            Expr::Compose { factors } => Expr::Compose { factors: all(factors) },
            Expr::Poly { coeffs, op } => {
                Expr::Poly { coeffs: coeffs.iter().map(|s| s.promote(field)).collect(), op: boxed(op) }
            }
            Expr::DirectSum { parts } => Expr::DirectSum { parts: all(parts) },
        }
    }
}

/// A complete operator document: `{"field": "Q" | "Qi", "op": EXPR}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDoc {
    pub field: Field,
    pub op: Expr,
}

impl OperatorDoc {
    pub fn new(field: Field, op: Expr) -> OperatorDoc {
        OperatorDoc { field, op }
    }

    /// Rejects empty periods and lists, non-square blocks, duplicate band
    /// offsets, and ℚ(i) scalars inside a ℚ document.
    pub fn validate(&self) -> Result<(), ParseError> {
        self.op.validate(self.field, "op")
    }
}

/// Parse and validate an operator document.
pub fn parse_operator(text: &str) -> Result<OperatorDoc, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: OperatorDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let located = serde_json::from_str::<serde_json::Value>(text)
            .ok()
            .and_then(|v| v.get("op").and_then(|op| locate_expr_error(op, "op".to_owned())));
        match located {
            Some(err) if path == "op" || path == "." => err,
            _ => ParseError::new(if path == "." { "$".to_owned() } else { path }, e.into_inner().to_string()),
        }
    })?;
    doc.validate()?;
    Ok(doc)
}

/// Deepest expression node below `value` that fails to deserialize.
///
/// Internally tagged enums buffer their input, which hides paths from
/// `serde_path_to_error`; this walks the raw tree instead.
fn locate_expr_error(value: &serde_json::Value, path: String) -> Option<ParseError> {
    let err = Expr::deserialize(value).err()?;
    if let serde_json::Value::Object(map) = value {
        for (key, child) in map {
            let child_path = format!("{path}.{key}");
            let found = match child {
                serde_json::Value::Object(o) if o.contains_key("kind") => locate_expr_error(child, child_path),
                serde_json::Value::Array(items) => items.iter().enumerate().find_map(|(i, item)| {
                    item.get("kind").and(locate_expr_error(item, format!("{child_path}[{i}]")))
                }),
                _ => None,
            };
            if found.is_some() {
                return found;
            }
        }
    }
    Some(ParseError::new(path, err.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_entries_are_one_based() {
        let s = EventuallyPeriodicSeq {
            head: vec![Scalar::from_i64(7, Field::Q)],
            period: vec![Scalar::from_i64(1, Field::Q), Scalar::from_i64(2, Field::Q)],
        };
        let got: Vec<_> = (1..=5).map(|n| s.entry(n).clone()).collect();
        let want: Vec<_> = [7, 1, 2, 1, 2].iter().map(|&v| Scalar::from_i64(v, Field::Q)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn rejects_malformed_documents_with_paths() {
        let empty_period = r#"{"field":"Q","op":{"kind":"backward_shift","weights":{"head":[],"period":[]}}}"#;
        let err = parse_operator(empty_period).unwrap_err();
        assert_eq!(err.path, "op.weights.period");

        let non_square = r#"{"field":"Q","op":{"kind":"finite_block","matrix":[["1","2"]],
            "tail":{"kind":"backward_shift","weights":{"period":["1"]}}}}"#;
        assert_eq!(parse_operator(non_square).unwrap_err().path, "op.matrix[0]");

        let mixed = r#"{"field":"Q","op":{"kind":"sum","terms":[
            {"kind":"diagonal","entries":{"period":["1"]}},
            {"kind":"scale","scalar":{"re":"0","im":"1"},"op":{"kind":"diagonal","entries":{"period":["1"]}}}]}}"#;
        assert_eq!(parse_operator(mixed).unwrap_err().path, "op.terms[1].scalar");

        let unknown = r#"{"field":"Q","op":{"kind":"sum","terms":[{"kind":"rotate"}]}}"#;
        let err = parse_operator(unknown).unwrap_err();
        assert!(err.path.starts_with("op.terms[0]"), "{}", err.path);
    }

    #[test]
    fn gaussian_document_accepts_both_scalar_forms() {
        let doc = r#"{"field":"Qi","op":{"kind":"diagonal","entries":{"period":["2",{"re":"0","im":"1"}]}}}"#;
        assert!(parse_operator(doc).is_ok());
    }

    #[test]
    fn serializes_back_to_the_grammar() {
        let doc = OperatorDoc::new(Field::Q, Expr::backward_shift(EventuallyPeriodicSeq::ones()));
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(text, r#"{"field":"Q","op":{"kind":"backward_shift","weights":{"head":[],"period":["1"]}}}"#);
        assert_eq!(parse_operator(&text).unwrap(), doc);
    }
}
