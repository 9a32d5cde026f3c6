//! Reduction modulo a prime, used only to prove two polynomials coprime.
//!
//! `P ≡ 1 (mod 4)`, so `−1` has a square root `I` in `𝔽_P` and
//! `a + bi ↦ a + b·I` is a ring map from the Gaussian rationals whose
//! denominators avoid `P`. If `a` and `b` reduce without losing their leading
//! coefficients and their images are coprime over `𝔽_P`, then `a` and `b` are
//! coprime: a nonconstant common factor would reduce to one of the same degree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::Poly;
use super::scalar::Scalar;

const P: u64 = 998_244_353;
/// `3^((P−1)/4) mod P`; 3 generates `𝔽_P^×`, so this squares to `−1`.
const I: u64 = 911_660_635;

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let r = ((n % &p) + &p) % &p;
    r.to_u64().expect("residue fits")
}

fn reduce_rational(r: &BigRational) -> Option<u64> {
    let d = reduce_int(r.denom());
    (d != 0).then(|| reduce_int(r.numer()) * inv(d) % P)
}

fn reduce_scalar(s: &Scalar) -> Option<u64> {
    let re = reduce_rational(s.re())?;
    let im = reduce_rational(&s.im())?;
    Some((re + im * I) % P)
}

/// Coefficients mod `P`, lowest first; `None` if a denominator vanishes or
/// the leading coefficient does.
fn reduce(p: &Poly) -> Option<Vec<u64>> {
    let c: Vec<u64> = p.coeffs().iter().map(reduce_scalar).collect::<Option<_>>()?;
    (c.last() != Some(&0)).then_some(c)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `a mod b` over `𝔽_P`; `b` nonzero with nonzero leading coefficient.
fn rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    let db = b.len() - 1;
    let lc_inv = inv(b[db]);
    while a.len() > db {
        let top = a.len() - 1;
        let c = a[top] * lc_inv % P;
        let shift = top - db;
        for (j, bj) in b.iter().enumerate() {
            a[shift + j] = (a[shift + j] + P - c * bj % P) % P;
        }
        trim(&mut a);
    }
    a
}

/// `true` only if `a` and `b` are certainly coprime. `false` is inconclusive.
pub(crate) fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
    let (Some(mut x), Some(mut y)) = (reduce(a), reduce(b)) else {
        return false;
    };
    while !y.is_empty() {
        let r = rem(x, &y);
        x = y;
        y = r;
    }
    x.len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Field;

    #[test]
    fn root_of_minus_one() {
        assert_eq!(I * I % P, P - 1);
        assert_eq!(P % 4, 1);
    }

    #[test]
    fn detects_coprime_and_common_factors() {
        let p = |s: &str| s.parse::<Poly>().unwrap();
        assert!(certainly_coprime(&p("t^2 + 1"), &p("t - 1")));
        assert!(!certainly_coprime(&p("t^2 - 1"), &p("t - 1")));
        let i: Scalar = "i".parse().unwrap();
        let t_minus_i = Poly::new(Field::Qi, vec![-&i, Scalar::one(Field::Qi)]);
        assert!(!certainly_coprime(&p("t^2 + 1"), &t_minus_i));
        assert!(certainly_coprime(&p("3"), &p("t")));
    }
}
