//! Exact scalars over ℚ and the Gaussian rationals ℚ(i).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::ArithError;

/// The scalar field a computation is carried out over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    /// The rationals, standing in for the reals.
    Q,
    /// The Gaussian rationals, standing in for the complex numbers.
    Qi,
}

impl Field {
    /// Smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Qi || other == Field::Qi {
            Field::Qi
        } else {
            Field::Q
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => f.write_str("Q"),
            Field::Qi => f.write_str("Qi"),
        }
    }
}

/// An exact element of ℚ or ℚ(i).
///
/// Equality and hashing are by value: `Q(1)` equals `Qi(1, 0)`. The tag only
/// records which field the value was produced in, and arithmetic promotes
/// mixed operands to ℚ(i).
#[derive(Clone, Debug)]
pub enum Scalar {
    Q(BigRational),
    Qi(BigRational, BigRational),
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Qi => Scalar::Qi(BigRational::zero(), BigRational::zero()),
        }
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(1, field)
    }

    pub fn from_i64(v: i64, field: Field) -> Scalar {
        let r = BigRational::from_integer(BigInt::from(v));
        match field {
            Field::Q => Scalar::Q(r),
            Field::Qi => Scalar::Qi(r, BigRational::zero()),
        }
    }

    /// `num/den` in ℚ. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `re + im·i` in ℚ(i).
    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Qi(re, im)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Qi(..) => Field::Qi,
        }
    }

    pub fn re(&self) -> &BigRational {
        match self {
            Scalar::Q(r) | Scalar::Qi(r, _) => r,
        }
    }

    pub fn im(&self) -> BigRational {
        match self {
            Scalar::Q(_) => BigRational::zero(),
            Scalar::Qi(_, i) => i.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Qi(r, i) => r.is_zero() && i.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Qi(r, i) => r.is_one() && i.is_zero(),
        }
    }

    /// Re-tag the value in `field ∨ self.field()`.
    pub fn promote(&self, field: Field) -> Scalar {
        match (self, field) {
            (Scalar::Q(r), Field::Qi) => Scalar::Qi(r.clone(), BigRational::zero()),
            _ => self.clone(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Qi(a, b) => {
                let norm = a * a + b * b;
                Scalar::Qi(a / &norm, -(b / &norm))
            }
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ArithError> {
        let inv = rhs.inv().ok_or(ArithError::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// Field-checked addition; mixed tags are a caller error.
    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar, ArithError> {
        check_fields(self.field(), rhs.field())?;
        Ok(self + rhs)
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar, ArithError> {
        check_fields(self.field(), rhs.field())?;
        Ok(self * rhs)
    }
}

pub(crate) fn check_fields(a: Field, b: Field) -> Result<(), ArithError> {
    if a == b {
        Ok(())
    } else {
        Err(ArithError::FieldMismatch { left: a, right: b })
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a == b,
            (Scalar::Q(a), Scalar::Qi(b, bi)) | (Scalar::Qi(b, bi), Scalar::Q(a)) => {
                a == b && bi.is_zero()
            }
            (Scalar::Qi(a, ai), Scalar::Qi(b, bi)) => a == b && ai == bi,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.re().hash(state);
        self.im().hash(state);
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(-r),
            Scalar::Qi(r, i) => Scalar::Qi(-r, -i),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Q(a), Scalar::Qi(b, bi)) | (Scalar::Qi(b, bi), Scalar::Q(a)) => {
                Scalar::Qi(a + b, bi.clone())
            }
            (Scalar::Qi(a, ai), Scalar::Qi(b, bi)) => Scalar::Qi(a + b, ai + bi),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Q(a), Scalar::Qi(b, bi)) => Scalar::Qi(a - b, -bi),
            (Scalar::Qi(a, ai), Scalar::Q(b)) => Scalar::Qi(a - b, ai.clone()),
            (Scalar::Qi(a, ai), Scalar::Qi(b, bi)) => Scalar::Qi(a - b, ai - bi),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Q(a), Scalar::Qi(b, bi)) | (Scalar::Qi(b, bi), Scalar::Q(a)) => {
                Scalar::Qi(a * b, a * bi)
            }
            (Scalar::Qi(a, ai), Scalar::Qi(b, bi)) => {
                if ai.is_zero() && bi.is_zero() {
                    return Scalar::Qi(a * b, BigRational::zero());
                }
                Scalar::Qi(a * b - ai * bi, a * bi + ai * b)
            }
        }
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] otherwise.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("scalar division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => f.write_str(&fmt_rational(r)),
            Scalar::Qi(r, i) => {
                let sign = if i.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", fmt_rational(r), sign, fmt_rational(&i.abs()))
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let bad = || ArithError::Parse(format!("invalid rational `{s}`"));
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ArithError::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = ArithError;

    /// Accepts `a`, `a/b`, and Gaussian forms `a/b+c/di`, `c/di`, `1-i`.
    fn from_str(s: &str) -> Result<Scalar, ArithError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s).map(Scalar::Q);
        };
        let split = body
            .char_indices()
            .rev()
            .find(|&(pos, c)| pos > 0 && (c == '+' || c == '-'))
            .map(|(pos, _)| pos);
        let (re, im) = match split {
            Some(pos) => (parse_rational(&body[..pos])?, &body[pos..]),
            None => (BigRational::zero(), body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other)?,
        };
        Ok(Scalar::Qi(re, im))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Q(r) => serializer.serialize_str(&fmt_rational(r)),
            Scalar::Qi(r, i) => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("re", &fmt_rational(r))?;
                map.serialize_entry("im", &fmt_rational(i))?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        struct ScalarVisitor;

        impl<'de> Visitor<'de> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"a/b\" or an object {\"re\": \"a/b\", \"im\": \"c/d\"}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::from_i64(v, Field::Q))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar::Q(BigRational::from_integer(BigInt::from(v))))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Scalar, A::Error> {
                let mut re = None;
                let mut im = None;
                while let Some(key) = map.next_key::<String>()? {
                    let value: String = map.next_value()?;
                    let parsed = parse_rational(&value).map_err(de::Error::custom)?;
                    match key.as_str() {
                        "re" => re = Some(parsed),
                        "im" => im = Some(parsed),
                        other => return Err(de::Error::unknown_field(other, &["re", "im"])),
                    }
                }
                Ok(Scalar::Qi(
                    re.ok_or_else(|| de::Error::missing_field("re"))?,
                    im.ok_or_else(|| de::Error::missing_field("im"))?,
                ))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn parses_rational_and_gaussian_forms() {
        assert_eq!(s("3"), Scalar::from_i64(3, Field::Q));
        assert_eq!(s("-2/4"), Scalar::ratio(-1, 2));
        let z = s("1/2-3/4i");
        assert_eq!(z.field(), Field::Qi);
        assert_eq!(z.re(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(z.im(), BigRational::new((-3).into(), 4.into()));
        assert_eq!(s("i"), Scalar::Qi(BigRational::zero(), BigRational::one()));
        assert_eq!(s("2-i").im(), -BigRational::one());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["0", "-7/3", "1/2+3/4i", "0-1i", "5+0i"] {
            let v = s(text);
            assert_eq!(v.to_string(), text);
            assert_eq!(s(&v.to_string()), v);
        }
    }

    #[test]
    fn gaussian_inverse() {
        let z = s("1+2i");
        let one = &z * &z.inv().unwrap();
        assert!(one.is_one());
        assert!(Scalar::zero(Field::Qi).inv().is_none());
    }

    #[test]
    fn mixed_tags_rejected_by_checked_ops() {
        let a = Scalar::one(Field::Q);
        let b = Scalar::one(Field::Qi);
        assert!(a.try_add(&b).is_err());
        assert_eq!(a.try_mul(&a).unwrap(), a);
        // Unchecked arithmetic promotes.
        assert_eq!((&a + &b).field(), Field::Qi);
    }

    #[test]
    fn json_forms() {
        let q: Scalar = serde_json::from_str("\"-1/3\"").unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"-1/3\"");
        let z: Scalar = serde_json::from_str(r#"{"re":"1/2","im":"-1"}"#).unwrap();
        assert_eq!(serde_json::to_string(&z).unwrap(), r#"{"re":"1/2","im":"-1"}"#);
    }
}
