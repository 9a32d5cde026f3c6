//! Dense univariate polynomials over [`Scalar`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::degree::GradedDegree;
use super::scalar::{check_fields, Field, Scalar};
use crate::error::ArithError;

/// Coefficients lowest degree first, never with a trailing zero.
#[derive(Clone, Debug)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Poly {
        let field = coeffs.iter().fold(field, |f, c| f.join(c.field()));
        let mut coeffs: Vec<Scalar> = coeffs.into_iter().map(|c| c.promote(field)).collect();
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| Scalar::from_i64(c, field)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(Scalar::one(field))
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(c: Scalar, k: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![Scalar::zero(field); k];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    /// The indeterminate `t`.
    pub fn t(field: Field) -> Poly {
        Poly::monomial(Scalar::one(field), 1)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> GradedDegree {
        match self.deg() {
            None => GradedDegree::NegInf,
            Some(d) => GradedDegree::Finite(d as i64),
        }
    }

    /// Conventional degree, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn promote(&self, field: Field) -> Poly {
        Poly::new(self.field.join(field), self.coeffs.clone())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field.join(c.field()), self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Scalar::zero(self.field); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field, coeffs }
    }

    /// Scaled to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn checked_div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), ArithError> {
        let ddeg = divisor.deg().ok_or(ArithError::DivisionByZero)?;
        let field = self.field.join(divisor.field);
        let lc_inv = divisor.leading().and_then(Scalar::inv).expect("nonzero leading coefficient");
        let mut rem: Vec<Scalar> = self.coeffs.iter().map(|c| c.promote(field)).collect();
        if rem.len() <= ddeg {
            return Ok((Poly::zero(field), Poly::new(field, rem)));
        }
        let mut quot = vec![Scalar::zero(field); rem.len() - ddeg];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + ddeg] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * d);
            }
            quot[i] = c;
        }
        rem.truncate(ddeg);
        Ok((Poly::new(field, quot), Poly::new(field, rem)))
    }

    /// Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        self.checked_div_rem(divisor).expect("polynomial division by zero")
    }

    /// `self / divisor` when the division is exact.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_one() {
            return Some(self.promote(self.field.join(divisor.field)));
        }
        let (q, r) = self.checked_div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.div_rem(self).1.is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if !self.is_zero() && !other.is_zero() && super::modular::certainly_coprime(self, other) {
            return Poly::one(self.field.join(other.field));
        }
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.div_rem(&b).1.monic();
            a = b;
            b = r;
        }
        a
    }

    /// Monic lcm; zero if either argument is zero.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field.join(other.field));
        }
        let g = self.gcd(other);
        (&self.exact_div(&g).expect("gcd divides") * other).monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field.join(x.field()));
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn try_add(&self, rhs: &Poly) -> Result<Poly, ArithError> {
        check_fields(self.field, rhs.field)?;
        Ok(self + rhs)
    }

    pub fn try_mul(&self, rhs: &Poly) -> Result<Poly, ArithError> {
        check_fields(self.field, rhs.field)?;
        Ok(self * rhs)
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let field = self.field.join(rhs.field);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(field, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let field = self.field.join(rhs.field);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![Scalar::zero(field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::new(field, coeffs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn fmt_monomial(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "t".to_owned(),
        _ => format!("t^{k}"),
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, e.g. `3*t^2 - 1/2*t + 4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = fmt_monomial(k);
            let (negative, body) = match c {
                Scalar::Q(r) => {
                    let magnitude = Scalar::Q(num_traits::Signed::abs(r));
                    let coef = if magnitude.is_one() && k > 0 {
                        String::new()
                    } else if k > 0 {
                        format!("{magnitude}*")
                    } else {
                        magnitude.to_string()
                    };
                    (num_traits::Signed::is_negative(r), format!("{coef}{mono}"))
                }
                Scalar::Qi(..) => {
                    let sep = if k > 0 { "*" } else { "" };
                    (false, format!("({c}){sep}{mono}"))
                }
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => f.write_str(&body)?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> ArithError {
        ArithError::Parse(format!("{msg} at byte {} of polynomial", self.pos))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == b'/') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn term(&mut self) -> Result<(Scalar, usize), ArithError> {
        let coef = match self.peek() {
            Some(b'(') => {
                let start = self.pos + 1;
                let close = self.src[start..]
                    .iter()
                    .position(|&c| c == b')')
                    .ok_or_else(|| self.err("unclosed parenthesis"))?;
                self.pos = start + close + 1;
                Some(std::str::from_utf8(&self.src[start..start + close]).expect("ascii").parse()?)
            }
            Some(c) if c.is_ascii_digit() => Some(self.digits().parse()?),
            _ => None,
        };
        if coef.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            if self.peek() != Some(b't') {
                return Err(self.err("expected `t` after `*`"));
            }
        }
        let power = if self.peek() == Some(b't') {
            self.pos += 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let d = self.digits();
                d.parse::<usize>().map_err(|_| self.err("invalid exponent"))?
            } else {
                1
            }
        } else if coef.is_none() {
            return Err(self.err("expected a coefficient or `t`"));
        } else {
            0
        };
        Ok((coef.unwrap_or_else(|| Scalar::one(Field::Q)), power))
    }
}

impl FromStr for Poly {
    type Err = ArithError;

    /// Parses the human form, e.g. `t^3 - 2*t + 1` or `(1+2i)*t + 3`.
    fn from_str(s: &str) -> Result<Poly, ArithError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = PolyParser { src: compact.as_bytes(), pos: 0 };
        if p.src.is_empty() {
            return Err(ArithError::Parse("empty polynomial".into()));
        }
        let mut acc = Poly::zero(Field::Q);
        let mut first = true;
        while p.pos < p.src.len() {
            let negative = match p.peek() {
                Some(b'+') => {
                    p.pos += 1;
                    false
                }
                Some(b'-') => {
                    p.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Err(p.err("expected `+` or `-`")),
            };
            let (c, k) = p.term()?;
            let c = if negative { -c } else { c };
            acc = &acc + &Poly::monomial(c, k);
            first = false;
        }
        Ok(acc)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<Scalar>::deserialize(deserializer)?;
        Ok(Poly::new(Field::Q, coeffs))
    }
}
