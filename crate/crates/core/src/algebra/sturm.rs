//! Exact real-root counting with Sturm sequences.

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Endpoint of an open interval on the real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

/// Signed remainder sequence `p, p', -rem(p, p'), ...`.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    let mut a = p.clone();
    let mut b = p.derivative();
    while !b.is_zero() {
        seq.push(b.clone());
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = -&r;
    }
    seq
}

fn sign_at(p: &Poly, at: &Bound) -> i8 {
    let s = |q: &Rational| -> i8 {
        if q.is_positive() {
            1
        } else if q.is_negative() {
            -1
        } else {
            0
        }
    };
    match at {
        Bound::Finite(x) => s(&p.eval(x)),
        Bound::PosInf => p.lead().map(s).unwrap_or(0),
        Bound::NegInf => {
            let l = p.lead().map(s).unwrap_or(0);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -l
            } else {
                l
            }
        }
    }
}

fn variations(seq: &[Poly], at: &Bound) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = sign_at(p, at);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `p` in the half-open interval `(lo, hi]`.
pub fn count_half_open(seq: &[Poly], lo: &Bound, hi: &Bound) -> usize {
    variations(seq, lo).saturating_sub(variations(seq, hi))
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn real_root_count(p: &Poly, lo: &Bound, hi: &Bound) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = p.squarefree();
    let seq = sturm_sequence(&sq);
    let mut n = count_half_open(&seq, lo, hi);
    if let Bound::Finite(b) = hi {
        if sq.eval(b).is_zero() && n > 0 {
            n -= 1;
        }
    }
    Ok(n)
}

/// All real roots are strictly inside `(-B, B)` for this Cauchy bound `B`.
pub fn cauchy_bound(p: &Poly) -> Rational {
    let lead = p.lead().expect("nonzero polynomial").abs();
    let m = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Isolating intervals `(lo, hi]` for the distinct real roots of `p`, in
/// increasing order. Each interval contains exactly one root.
pub fn isolate_real_roots(p: &Poly) -> Result<Vec<(Rational, Rational)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = p.squarefree();
    if sq.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let seq = sturm_sequence(&sq);
    let b = cauchy_bound(&sq);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_half_open(&seq, &Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
        match n {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / int(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Shrinks an isolating interval `(lo, hi]` of `p` until it is narrower than `width`.
pub fn refine(p: &Poly, lo: Rational, hi: Rational, width: &Rational) -> (Rational, Rational) {
    let seq = sturm_sequence(&p.squarefree());
    let (mut lo, mut hi) = (lo, hi);
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) / int(2);
        if count_half_open(
            &seq,
            &Bound::Finite(lo.clone()),
            &Bound::Finite(mid.clone()),
        ) == 1
        {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whole(p: &Poly) -> usize {
        real_root_count(p, &Bound::NegInf, &Bound::PosInf).unwrap()
    }

    #[test]
    fn counts_on_whole_line() {
        assert_eq!(whole(&Poly::from_ints(&[1, 0, 1])), 0);
        assert_eq!(whole(&Poly::from_ints(&[-3, -1, -1, 1])), 1);
        assert_eq!(whole(&Poly::from_ints(&[-30, 1, 0, 1])), 1);
        assert_eq!(whole(&Poly::from_ints(&[-4, 0, -3, 0, 1])), 2);
    }

    #[test]
    fn open_interval_excludes_endpoints() {
        let p = Poly::from_ints(&[-1, 0, 1]);
        let c = |a: i64, b: i64| {
            real_root_count(&p, &Bound::Finite(int(a)), &Bound::Finite(int(b))).unwrap()
        };
        assert_eq!(c(-1, 1), 0);
        assert_eq!(c(-2, 1), 1);
        assert_eq!(c(-2, 2), 2);
        assert_eq!(c(1, 5), 0);
    }

    #[test]
    fn isolation_separates_roots() {
        let p = Poly::from_ints(&[0, -2, 0, 1]); // x^3 - 2x
        let iv = isolate_real_roots(&p).unwrap();
        assert_eq!(iv.len(), 3);
        for (lo, hi) in iv {
            assert!(lo < hi);
        }
    }
}
