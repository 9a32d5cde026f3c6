use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Field, Scalar};

/// A finitely supported sequence: sorted `(index, value)` pairs, no stored zeros.
///
/// Models elements of `φ = ω′` (functionals), determined coordinates of
/// witness vectors, and, with arbitrary keys, sparse columns inside the
/// elimination engine. Domain indices are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FinSuppVec {
    entries: Vec<(usize, Scalar)>,
}

impl FinSuppVec {
    pub fn zero() -> FinSuppVec {
        FinSuppVec::default()
    }

    /// The coordinate functional `e_n*` (or basis vector `e_n`).
    pub fn basis(n: usize, field: Field) -> FinSuppVec {
        FinSuppVec { entries: vec![(n, Scalar::one(field))] }
    }

    pub fn single(n: usize, value: Scalar) -> FinSuppVec {
        if value.is_zero() {
            FinSuppVec::zero()
        } else {
            FinSuppVec { entries: vec![(n, value)] }
        }
    }

    /// Sorts, merges repeated indices by summing, and drops zeros.
    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> FinSuppVec {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = &*acc + &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        FinSuppVec { entries: out }
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn first_index(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    pub fn last_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    /// Join of the entries' field tags, `Q` when empty.
    pub fn field(&self) -> Field {
        self.entries.iter().fold(Field::Q, |f, (_, v)| f.join(v.field()))
    }

    pub fn promote(&self, field: Field) -> FinSuppVec {
        FinSuppVec { entries: self.entries.iter().map(|(i, v)| (*i, v.promote(field))).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> FinSuppVec {
        if c.is_zero() {
            return FinSuppVec::zero();
        }
        FinSuppVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// Re-index every entry through `f`, which must be strictly increasing.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> FinSuppVec {
        FinSuppVec { entries: self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect() }
    }

    /// `self + c·other`, by a sorted merge.
    pub fn axpy(&self, c: &Scalar, other: &FinSuppVec) -> FinSuppVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * y));
                        b.next();
                    } else {
                        let s = x + &(c * y);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, c * y));
                    b.next();
                }
                (None, None) => break,
            }
        }
        FinSuppVec { entries: out }
    }

    pub fn add(&self, other: &FinSuppVec) -> FinSuppVec {
        self.axpy(&Scalar::one(other.field()), other)
    }

    pub fn sub(&self, other: &FinSuppVec) -> FinSuppVec {
        self.axpy(&-Scalar::one(other.field()), other)
    }

    /// `Σ_n self_n · other_n` over the common support.
    pub fn pairing(&self, other: &FinSuppVec) -> Scalar {
        let mut acc = Scalar::zero(self.field().join(other.field()));
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc = &acc + &(x * y);
                a.next();
                b.next();
            }
        }
        acc
    }
}

/// `Σ_n f_n·u_n` over the finite common support.
pub fn pairing(f: &FinSuppVec, u: &FinSuppVec) -> Scalar {
    f.pairing(u)
}

impl fmt::Display for FinSuppVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.entries.iter().map(|(i, v)| format!("({v})·e{i}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for FinSuppVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinSuppVec {
    /// Requires strictly increasing positive indices; explicit zeros are dropped.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<(usize, Scalar)>::deserialize(deserializer)?;
        let mut prev = 0;
        for (i, _) in &raw {
            if *i == 0 {
                return Err(D::Error::custom("indices are 1-based; found index 0"));
            }
            if *i <= prev {
                return Err(D::Error::custom(format!("indices must be strictly increasing (index {i} after {prev})")));
            }
            prev = *i;
        }
        Ok(FinSuppVec { entries: raw.into_iter().filter(|(_, v)| !v.is_zero()).collect() })
    }
}
