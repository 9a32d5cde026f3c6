use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A degree in `ℤ ∪ {−∞}`; `deg 0 = −∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradedDegree {
    NegInf,
    Finite(i64),
}

impl GradedDegree {
    pub fn is_finite(self) -> bool {
        matches!(self, GradedDegree::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            GradedDegree::NegInf => None,
            GradedDegree::Finite(d) => Some(d),
        }
    }
}

impl From<i64> for GradedDegree {
    fn from(d: i64) -> Self {
        GradedDegree::Finite(d)
    }
}

impl Ord for GradedDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GradedDegree::NegInf, GradedDegree::NegInf) => Ordering::Equal,
            (GradedDegree::NegInf, _) => Ordering::Less,
            (_, GradedDegree::NegInf) => Ordering::Greater,
            (GradedDegree::Finite(a), GradedDegree::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for GradedDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for GradedDegree {
    type Output = GradedDegree;
    fn add(self, rhs: GradedDegree) -> GradedDegree {
        match (self, rhs) {
            (GradedDegree::Finite(a), GradedDegree::Finite(b)) => GradedDegree::Finite(a + b),
            _ => GradedDegree::NegInf,
        }
    }
}

impl Add<i64> for GradedDegree {
    type Output = GradedDegree;
    fn add(self, rhs: i64) -> GradedDegree {
        self + GradedDegree::Finite(rhs)
    }
}

impl fmt::Display for GradedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedDegree::NegInf => f.write_str("-inf"),
            GradedDegree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for GradedDegree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            GradedDegree::NegInf => serializer.serialize_str("-inf"),
            GradedDegree::Finite(d) => serializer.serialize_i64(*d),
        }
    }
}

impl<'de> Deserialize<'de> for GradedDegree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(d) => Ok(GradedDegree::Finite(d)),
            Repr::Text(s) if s == "-inf" => Ok(GradedDegree::NegInf),
            Repr::Text(s) => Err(serde::de::Error::custom(format!("invalid degree `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::GradedDegree::*;

    #[test]
    fn neg_inf_absorbs_and_is_least() {
        assert_eq!(NegInf + Finite(4), NegInf);
        assert_eq!(Finite(2) + Finite(3), Finite(5));
        assert_eq!(NegInf.max(Finite(-7)), Finite(-7));
        assert!(NegInf < Finite(i64::MIN));
    }
}
