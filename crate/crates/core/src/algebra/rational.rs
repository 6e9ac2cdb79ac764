//! Helpers around [`num_rational::BigRational`], which carries every element of
//! Q and Z appearing in sets and maps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// max(|numerator|, denominator)
pub fn height(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact cube root of an integer, if it is a perfect cube.
pub fn exact_icbrt(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    (&r * &r * &r == *n).then_some(r)
}

/// Exact square root of a rational, if it is a square in Q.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(Rational::new(n, d))
}

/// Splits an integer into `(s, f)` with `n = s^2 * f` and `f` squarefree.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            f *= &p;
        }
        p += 1;
    }
    f *= m;
    (s, f * sign)
}

/// Positive divisors of `n != 0`, in increasing order. Returns `None` when
/// trial division would exceed `limit` candidates.
pub fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let m = n.abs();
    if m.is_zero() {
        return None;
    }
    let root = m.sqrt();
    if root > BigInt::from(limit) {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while d <= root {
        if (&m % &d).is_zero() {
            let q = &m / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

pub fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// The rational with the smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.is_zero() || hi.is_zero() || (lo.is_negative() && hi.is_positive()) {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if next <= *hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_is_max_of_parts() {
        assert_eq!(height(&frac(-129, 100)), BigInt::from(129));
        assert_eq!(height(&frac(3, 1000)), BigInt::from(1000));
        assert_eq!(height(&int(0)), BigInt::from(1));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(
            squarefree_decompose(&BigInt::from(12)),
            (BigInt::from(2), BigInt::from(3))
        );
        assert_eq!(
            squarefree_decompose(&BigInt::from(-4)),
            (BigInt::from(2), BigInt::from(-1))
        );
        assert_eq!(
            squarefree_decompose(&BigInt::from(33)),
            (BigInt::from(1), BigInt::from(33))
        );
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&frac(1, 3), &frac(2, 3)), frac(1, 2));
        assert_eq!(simplest_between(&frac(-7, 3), &frac(-2, 1)), int(-2));
        assert_eq!(
            simplest_between(&frac(12899, 10000), &frac(12901, 10000)),
            frac(129, 100)
        );
        assert_eq!(simplest_between(&frac(-1, 2), &frac(1, 2)), int(0));
    }

    #[test]
    fn divisor_listing() {
        let ds: Vec<i64> = divisors(&BigInt::from(36), 1000)
            .unwrap()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert!(parse_rational("1/0").is_err());
    }
}
