//! The parametrized set built from the base-`n` digits of a power of two.
//!
//! For `n >= 3` not a power of two let `2^rho` be the least power of two at
//! or above `n^3`, and write `2^rho = m3 n^3 + m2 n^2 + m1 n + m0`. With
//! `zeta(x) = m3 x^3 + m2 x^2 + m1 x + m0` the set holds `-1, 0, 1`, the
//! halves `-1/2^k`, and enough partial sums of `zeta(n)` to force
//! `zeta(f(n)) = 2^rho`. The other two roots of `zeta(x) - 2^rho` give the
//! complex witness.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{adjoin_root, Elem, FieldDescriptor, Poly, Rational, RingDomain};
use crate::error::{Error, Result};
use crate::nbhd::ArithmeticMap;

use super::families::is_power_of_two;

#[derive(Clone, Debug)]
pub struct JSet {
    pub n: u64,
    pub rho: u32,
    /// `(m3, m2, m1, m0)`.
    pub digits: [BigInt; 4],
    pub elements: Vec<Elem>,
}

impl JSet {
    pub fn power(&self) -> BigInt {
        BigInt::one() << self.rho
    }

    /// `zeta(x) - 2^rho`.
    pub fn shifted_zeta(&self) -> Poly {
        let [m3, m2, m1, m0] = &self.digits;
        Poly::from_integers(&[m0 - self.power(), m1.clone(), m2.clone(), m3.clone()])
    }

    /// The quadratic left after dividing `zeta(x) - 2^rho` by `x - n`.
    pub fn cofactor(&self) -> Result<Poly> {
        let n = Rational::from_integer(BigInt::from(self.n));
        self.shifted_zeta()
            .exact_div(&Poly::linear_root(&n))
            .ok_or_else(|| Error::Unsupported(format!("x - {} does not divide zeta", self.n)))
    }
}

fn rat(n: &BigInt) -> Elem {
    Elem::rational(Rational::from_integer(n.clone()))
}

/// The set in its defining order with `x` standing in for `n` in every entry
/// built from powers of `n`. Entries that do not involve `n` are kept as is.
fn assemble(rho: u32, digits: &[BigInt; 4], x: &Elem) -> Vec<Elem> {
    let mut v = vec![Elem::int(-1), Elem::zero(), Elem::one()];
    let mut half = Elem::one();
    for _ in 0..rho {
        half = &half * &Elem::frac(1, 2);
        v.push(-&half);
    }
    let x2 = x * x;
    let x3 = &x2 * x;
    v.push(x.clone());
    v.push(x2.clone());
    let [m3, m2, m1, m0] = digits;
    let mut acc = Elem::zero();
    for (count, step) in [(m3, &x3), (m2, &x2), (m1, x), (m0, &Elem::one())] {
        let mut k = BigInt::zero();
        while &k < count {
            acc = &acc + step;
            v.push(acc.clone());
            k += 1;
        }
    }
    v
}

/// Least `rho` with `n^3 <= 2^rho`, and the base-`n` digits of `2^rho`.
pub fn rho_and_digits(n: u64) -> Result<(u32, [BigInt; 4])> {
    if n < 3 || is_power_of_two(n) {
        return Err(Error::ParameterOutOfRange(format!(
            "J needs n >= 3 and not a power of 2, got {n}"
        )));
    }
    let nb = BigInt::from(n);
    let n3: BigInt = &nb * &nb * &nb;
    let rho = (&n3 - 1u32).bits() as u32;
    let p = BigInt::one() << rho;
    let mut digits: [BigInt; 4] = Default::default();
    let mut rest = p.clone();
    for (i, place) in [n3.clone(), &nb * &nb, nb.clone(), BigInt::one()]
        .iter()
        .enumerate()
    {
        let (q, r) = rest.div_rem(place);
        digits[i] = q;
        rest = r;
    }
    if !(n3 <= p && p < &n3 * &nb) || digits[0] < BigInt::one() || digits[0] >= nb {
        return Err(Error::Unsupported(format!(
            "digit postcondition failed at n = {n}"
        )));
    }
    Ok((rho, digits))
}

pub fn gen_j(n: u64) -> Result<JSet> {
    let (rho, digits) = rho_and_digits(n)?;
    let elements = assemble(rho, &digits, &rat(&BigInt::from(n)));
    Ok(JSet {
        n,
        rho,
        digits,
        elements,
    })
}

/// The complex witness: `n` goes to a root `z` of the cofactor, every entry
/// built from `n` goes to the same expression in `z`, the rest is fixed.
pub fn theta(j: &JSet) -> Result<(Arc<FieldDescriptor>, ArithmeticMap)> {
    let (field, z) = adjoin_root(&j.cofactor()?)?;
    let images = assemble(j.rho, &j.digits, &z);
    let map = ArithmeticMap::from_pairs(
        RingDomain::Complexes,
        j.elements.iter().cloned().zip(images),
    );
    Ok((field, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem::int(x)).collect()
    }

    #[test]
    fn three() {
        let j = gen_j(3).unwrap();
        assert_eq!(j.rho, 5);
        assert_eq!(j.digits, [1, 0, 1, 2].map(BigInt::from));
        let mut want = ints(&[-1, 0, 1]);
        want.extend((1..=5).map(|k| Elem::frac(-1, 1 << k)));
        want.extend(ints(&[3, 9, 27, 30, 31, 32]));
        assert_eq!(j.elements, want);
        assert_eq!(j.cofactor().unwrap(), Poly::from_ints(&[10, 3, 1]));
    }

    #[test]
    fn five_and_six() {
        let j = gen_j(5).unwrap();
        assert_eq!(
            (j.rho, j.digits.clone()),
            (7, [1, 0, 0, 3].map(BigInt::from))
        );
        assert!(ints(&[125, 126, 127, 128])
            .iter()
            .all(|e| j.elements.contains(e)));
        let j = gen_j(6).unwrap();
        assert_eq!(
            (j.rho, j.digits.clone()),
            (8, [1, 1, 0, 4].map(BigInt::from))
        );
        assert!(ints(&[216, 252, 253, 254, 255, 256])
            .iter()
            .all(|e| j.elements.contains(e)));
    }

    #[test]
    fn rejects_powers_of_two() {
        for n in [0, 1, 2, 4, 8, 1024] {
            assert!(gen_j(n).is_err(), "{n}");
        }
    }

    #[test]
    fn theta_at_three() {
        let j = gen_j(3).unwrap();
        let (_, map) = theta(&j).unwrap();
        let z = map.get(&Elem::int(3)).unwrap().clone();
        assert_eq!(&z * &z, &(&Elem::int(-3) * &z) - &Elem::int(10));
        // 30 = 27 + 3 is also 32 - 2, so it stays put
        for x in [30, 31, 32] {
            assert_eq!(map.get(&Elem::int(x)), Some(&Elem::int(x)));
        }
        assert_ne!(map.get(&Elem::int(27)), Some(&Elem::int(27)));
    }
}
