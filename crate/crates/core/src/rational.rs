//! Exact rational scalars and vectors.
//!
//! Scalars are `num_rational::BigRational`, which keeps every value in lowest
//! terms with a positive denominator after each operation. Vectors are plain
//! `Vec`s; dimensions are checked at the public API boundaries.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = num_rational::BigRational;
pub type QVector = Vec<Rational>;
pub type IntVector = Vec<BigInt>;

/// `n/d` as an exact rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qvec(entries: &[(i64, i64)]) -> QVector {
    entries.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn qvec_int(entries: &[i64]) -> QVector {
    entries.iter().map(|&n| rint(n)).collect()
}

pub fn ivec(entries: &[i64]) -> IntVector {
    entries.iter().map(|&n| BigInt::from(n)).collect()
}

pub fn int_to_q(v: &[BigInt]) -> QVector {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Returns the vector as integers when every entry has denominator one.
pub fn q_to_int(v: &[Rational]) -> Option<IntVector> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Integer-by-rational inner product, the common case of a constraint row
/// evaluated at a rational point.
pub fn dot_iq(a: &[BigInt], x: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), x.len());
    let mut acc = Rational::zero();
    for (ai, xi) in a.iter().zip(x) {
        if !ai.is_zero() && !xi.is_zero() {
            acc += xi * Rational::from_integer(ai.clone());
        }
    }
    acc
}

pub fn dot_ii(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> QVector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg_int(a: &[BigInt]) -> IntVector {
    a.iter().map(|x| -x).collect()
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Scales a nonzero rational vector by a positive factor so that it becomes
/// a primitive integer vector. Returns the integer vector and the factor.
pub fn primitive_multiple(v: &[Rational]) -> Option<(IntVector, Rational)> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: IntVector = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = gcd_all(&ints);
    let prim = ints.iter().map(|x| x / &g).collect();
    Some((prim, Rational::new(lcm, g)))
}

/// Divides an integer vector by the gcd of its entries (gcd taken positive).
pub fn make_primitive(v: &[BigInt]) -> IntVector {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 0,
        msg: format!("invalid rational '{s}'"),
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn format_vector(v: &[Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn format_int_vector(v: &[BigInt]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// True when the first nonzero entry is positive.
pub fn leading_positive(v: &[BigInt]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

pub fn unit_vector(n: usize, i: usize) -> IntVector {
    (0..n)
        .map(|j| if j == i { BigInt::one() } else { BigInt::zero() })
        .collect()
}

pub fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_after_arithmetic() {
        let a = rat(6, -4);
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        let b = rat(1, 6);
        assert_eq!(&a + &b, rat(-4, 3));
        assert_eq!((&a + &b) - &b, a);
    }

    #[test]
    fn serialization_format() {
        assert_eq!(rat(3, 1).to_string(), "3");
        assert_eq!(rat(-1, 2).to_string(), "-1/2");
        assert_eq!(parse_rational("4/-6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational(" 7 ").unwrap(), rint(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_multiple_scales_positively() {
        let (v, f) = primitive_multiple(&qvec(&[(1, 2), (-1, 3)])).unwrap();
        assert_eq!(v, ivec(&[3, -2]));
        assert_eq!(f, rint(6));
        assert!(primitive_multiple(&qvec_int(&[0, 0])).is_none());
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(ceil(&rat(-1, 2)), BigInt::from(0));
        assert_eq!(floor(&rat(7, 2)), BigInt::from(3));
    }
}
