//! Reduced rational functions in one variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize};

use super::degree::GradedDegree;
use super::poly::Poly;
use super::scalar::{check_fields, Field, Scalar};
use crate::error::ArithError;

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0/1`.
///
/// Since the form is canonical, structural equality is equality in `𝕂(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let field = num.field().join(den.field());
        if num.is_zero() {
            return Ok(RatFunc::zero(field));
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        let lc = den.leading().cloned().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num: num.promote(field), den: den.promote(field) })
    }

    pub fn zero(field: Field) -> RatFunc {
        RatFunc { num: Poly::zero(field), den: Poly::one(field) }
    }

    pub fn one(field: Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(field))
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let field = p.field();
        RatFunc { num: p, den: Poly::one(field) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> Field {
        self.num.field().join(self.den.field())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num − deg den`, or `−∞` for zero.
    pub fn degree(&self) -> GradedDegree {
        match (self.num.deg(), self.den.deg()) {
            (Some(n), Some(d)) => GradedDegree::Finite(n as i64 - d as i64),
            _ => GradedDegree::NegInf,
        }
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.field().join(c.field()));
        }
        RatFunc { num: self.num.scale(c), den: self.den.promote(c.field()) }
    }

    /// Multiplication by the indeterminate: `(M f)(t) = t·f(t)`.
    pub fn m_apply(&self) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        if self.den.coeff(0).is_zero() {
            // t divides the denominator; cancel one factor.
            let den = Poly::new(self.den.field(), self.den.coeffs()[1..].to_vec());
            RatFunc { num: self.num.clone(), den }
        } else {
            RatFunc { num: self.num.shift(1), den: self.den.clone() }
        }
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

/// Field-checked sum of two rational functions.
pub fn rat_add(f: &RatFunc, g: &RatFunc) -> Result<RatFunc, ArithError> {
    check_fields(f.field(), g.field())?;
    Ok(f + g)
}

/// Field-checked product of two rational functions.
pub fn rat_mul(f: &RatFunc, g: &RatFunc) -> Result<RatFunc, ArithError> {
    check_fields(f.field(), g.field())?;
    Ok(f * g)
}

/// `t·f`.
pub fn m_apply(f: &RatFunc) -> RatFunc {
    f.m_apply()
}

pub fn rat_degree(f: &RatFunc) -> GradedDegree {
    f.degree()
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        let g = self.den.gcd(&rhs.den);
        let l = self.den.exact_div(&g).expect("gcd divides");
        let r = rhs.den.exact_div(&g).expect("gcd divides");
        RatFunc::new(&(&self.num * &r) + &(&rhs.num * &l), &l * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        // Cross-cancel first to keep intermediate degrees small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cancel = |p: &Poly, g: &Poly| if g.is_zero() { p.clone() } else { p.exact_div(g).expect("gcd divides") };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        RatFunc::new(num, den).expect("nonzero denominator")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: Poly,
            den: Poly,
        }
        let raw = Raw::deserialize(deserializer)?;
        RatFunc::new(raw.num, raw.den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn r(n: &str, d: &str) -> RatFunc {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn canonical_form() {
        let f = r("2*t^2 - 2", "4*t + 4");
        assert_eq!(f.num(), &p("1/2*t - 1/2"));
        assert_eq!(f.den(), &Poly::one(Field::Q));
        assert_eq!(r("0", "t^2 + 3"), RatFunc::zero(Field::Q));
        assert!(RatFunc::new(p("1"), Poly::zero(Field::Q)).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(r("t^2 + 1", "t").degree(), GradedDegree::Finite(1));
        assert_eq!(r("1", "t^3").degree(), GradedDegree::Finite(-3));
        assert_eq!(RatFunc::zero(Field::Q).degree(), GradedDegree::NegInf);
    }

    #[test]
    fn add_and_mul_examples() {
        assert_eq!(&r("1", "t") * &r("t", "1"), RatFunc::one(Field::Q));
        assert_eq!(&r("t", "t + 1") + &r("1", "t + 1"), RatFunc::one(Field::Q));
        assert_eq!((&r("t + 1", "1") * &r("t - 1", "1")).degree(), GradedDegree::Finite(2));
    }

    #[test]
    fn m_apply_examples() {
        assert_eq!(m_apply(&RatFunc::one(Field::Q)), r("t", "1"));
        assert_eq!(m_apply(&r("1", "t")), RatFunc::one(Field::Q));
        assert_eq!(m_apply(&RatFunc::zero(Field::Q)), RatFunc::zero(Field::Q));
        let f = r("t + 2", "t^2 + 1");
        assert_eq!(m_apply(&f), &f * &r("t", "1"));
    }

    #[test]
    fn mixed_fields_error() {
        let a = RatFunc::one(Field::Q);
        let b = RatFunc::one(Field::Qi);
        assert!(matches!(rat_add(&a, &b), Err(ArithError::FieldMismatch { .. })));
        assert!(rat_mul(&a, &b).is_err());
        assert!(rat_add(&b, &b).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let f = r("t + 2", "t^2 + 1");
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"num":["2","1"],"den":["1","0","1"]}"#);
        let back: RatFunc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
