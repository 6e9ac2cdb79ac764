//! Root finding for rational polynomials: exact rational roots, roots inside
//! a given number field, and quadratic adjunction.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::{Elem, FieldDescriptor};
use super::poly::Poly;
use super::rational::{divisors, int, simplest_between, Rational};
use super::sturm::{isolate_real_roots, refine};
use crate::error::{Error, Result};

/// Highest degree accepted by equation solving.
pub const DEGREE_CAP: usize = 6;

/// Trial-division limit when enumerating divisors for quadratic factor search.
const DIVISOR_LIMIT: u64 = 1_000_000;
/// Upper bound on interpolation candidates tried by the quadratic factor search.
const COMBINATION_LIMIT: usize = 4_000_000;

/// The exact set of rational roots of `p`, sorted increasingly.
///
/// Each real root is isolated and narrowed below `1/(2 a_n^2)`, where `a_n` is
/// the leading coefficient of the primitive integer form; the unique rational
/// with denominator at most `a_n` left in the interval is the simplest one, and
/// it is kept only if it evaluates `p` to zero.
pub fn rational_roots(p: &Poly) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sq = p.squarefree();
    match sq.degree() {
        Some(0) => return Ok(Vec::new()),
        Some(1) => return Ok(vec![-sq.coeff(0) / sq.coeff(1)]),
        _ => {}
    }
    let lead = sq.primitive_integer().last().unwrap().clone();
    let width = Rational::new(BigInt::one(), BigInt::from(2) * &lead * &lead);
    let mut out = Vec::new();
    for (lo, hi) in isolate_real_roots(&sq)? {
        let (lo, hi) = refine(&sq, lo, hi, &width);
        let cand = simplest_between(&lo, &hi);
        if sq.eval(&cand).is_zero() {
            out.push(cand);
        }
    }
    out.sort();
    Ok(out)
}

/// Divides out every rational root (with multiplicity); returns the roots and
/// the cofactor, which has no rational roots.
pub fn strip_rational_roots(p: &Poly) -> Result<(Vec<Rational>, Poly)> {
    let rs = rational_roots(p)?;
    let mut cof = p.clone();
    for r in &rs {
        let lin = Poly::linear_root(r);
        while let Some(q) = cof.exact_div(&lin) {
            cof = q;
        }
    }
    Ok((rs, cof))
}

/// Kronecker search for monic quadratic factors of a polynomial with no
/// rational roots. Returns the factors found and the remaining cofactor, or
/// `None` when the search would exceed its size limits.
pub fn quadratic_factors(p: &Poly) -> Option<(Vec<Poly>, Poly)> {
    let mut factors = Vec::new();
    let mut rest = p.clone();
    while rest.degree().unwrap_or(0) >= 4 {
        match find_quadratic_factor(&rest)? {
            Some(g) => {
                rest = rest.exact_div(&g).expect("factor divides");
                factors.push(g);
            }
            None => break,
        }
    }
    if rest.degree() == Some(2) {
        factors.push(rest.monic());
        rest = Poly::one();
    }
    Some((factors, rest))
}

fn find_quadratic_factor(p: &Poly) -> Option<Option<Poly>> {
    let ints = p.primitive_integer();
    let prim = Poly::from_integers(&ints);
    let at = |x: i64| prim.eval(&int(x)).to_integer();
    let (v0, v1, vm) = (at(0), at(1), at(-1));
    if v0.is_zero() || v1.is_zero() || vm.is_zero() {
        return Some(None);
    }
    let d0 = divisors(&v0, DIVISOR_LIMIT)?;
    let d1 = divisors(&v1, DIVISOR_LIMIT)?;
    let dm = divisors(&vm, DIVISOR_LIMIT)?;
    if d0.len() * d1.len() * dm.len() * 8 > COMBINATION_LIMIT {
        return None;
    }
    let signed = |ds: &[BigInt]| -> Vec<BigInt> {
        ds.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
    };
    let (s0, s1, sm) = (signed(&d0), signed(&d1), signed(&dm));
    let two = BigInt::from(2);
    for c in &s0 {
        for a1 in &s1 {
            for am in &sm {
                let sum = a1 + am;
                if !(&sum % &two).is_zero() {
                    continue;
                }
                let a = &sum / &two - c;
                if !a.is_positive() {
                    continue;
                }
                let b = (a1 - am) / &two;
                let g = Poly::from_integers(&[c.clone(), b, a]);
                if prim.exact_div(&g).is_some() {
                    return Some(Some(g.monic()));
                }
            }
        }
    }
    Some(None)
}

/// Irreducibility over Q for degree at most 4.
pub fn is_irreducible(m: &Poly) -> Result<bool> {
    let deg = m.degree().ok_or(Error::ZeroPolynomial)?;
    if deg <= 1 {
        return Ok(deg == 1);
    }
    if !rational_roots(m)?.is_empty() {
        return Ok(false);
    }
    match deg {
        2 | 3 => Ok(true),
        4 => match quadratic_factors(m) {
            Some((fs, _)) => Ok(fs.is_empty()),
            None => Err(Error::Unsupported(format!(
                "cannot certify irreducibility of {m}"
            ))),
        },
        _ => Err(Error::Unsupported(format!(
            "irreducibility test for degree {deg}"
        ))),
    }
}

/// Roots of a rational polynomial inside Q or inside a number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldRoots {
    pub roots: Vec<Elem>,
    /// `true` when `roots` is provably the full set of roots in the field.
    pub complete: bool,
}

pub fn roots_in_field(p: &Poly, field: Option<&Arc<FieldDescriptor>>) -> Result<FieldRoots> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: deg,
            cap: DEGREE_CAP,
        });
    }
    let (rats, cof) = strip_rational_roots(p)?;
    let mut roots: Vec<Elem> = rats.into_iter().map(Elem::rational).collect();
    let Some(field) = field else {
        return Ok(FieldRoots {
            roots,
            complete: true,
        });
    };
    if cof.degree().unwrap_or(0) == 0 {
        return Ok(FieldRoots {
            roots,
            complete: true,
        });
    }
    let complete = match field.degree() {
        2 => match quadratic_factors(&cof) {
            Some((quads, _)) => {
                // a root in a quadratic field has a rational quadratic minimal
                // polynomial, so whatever is left over contributes nothing
                for g in quads {
                    if let Some(s) = field.sqrt_of(&g.quadratic_discriminant().unwrap()) {
                        let minus_b = Elem::rational(-g.coeff(1));
                        let half = Elem::frac(1, 2);
                        roots.push(&(&minus_b + &s) * &half);
                        roots.push(&(&minus_b - &s) * &half);
                    }
                }
                true
            }
            None => false,
        },
        3 => {
            // quadratic factors have no roots in a cubic field
            let rest = match quadratic_factors(&cof) {
                Some((_, rest)) => Some(rest),
                None if cof.degree() == Some(3) => Some(cof.clone()),
                None => None,
            };
            match rest {
                Some(mut rest) => {
                    let m = field.min_poly();
                    let mut hit = false;
                    while let Some(q) = rest.exact_div(m) {
                        rest = q;
                        hit = true;
                    }
                    if hit {
                        roots.push(Elem::generator(field));
                    }
                    let normal = m
                        .cubic_discriminant()
                        .and_then(|d| super::rational::rational_sqrt(&d))
                        .is_some();
                    rest.degree() == Some(0) && !(hit && normal)
                }
                None => false,
            }
        }
        _ => {
            if cof.exact_div(field.min_poly()).is_some() {
                roots.push(Elem::generator(field));
            }
            false
        }
    };
    roots.sort();
    roots.dedup();
    Ok(FieldRoots { roots, complete })
}

/// Adjoins a root of an irreducible quadratic, returning the new field and its
/// generator.
pub fn adjoin_root(q: &Poly) -> Result<(Arc<FieldDescriptor>, Elem)> {
    if q.degree() != Some(2) {
        return Err(Error::Unsupported("adjoinRoot expects a quadratic".into()));
    }
    if !rational_roots(q)?.is_empty() {
        return Err(Error::Reducible(q.to_string()));
    }
    let field = FieldDescriptor::new(q)?;
    let root = Elem::generator(&field);
    Ok((field, root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::frac;

    #[test]
    fn rational_roots_examples() {
        assert!(rational_roots(&Poly::from_ints(&[-3, -1, -1, 1]))
            .unwrap()
            .is_empty());
        assert_eq!(
            rational_roots(&Poly::from_ints(&[-3, 1, -3, 1])).unwrap(),
            vec![int(3)]
        );
        let e = Poly::new(vec![int(-1), int(0), frac(9, 4), int(1)]);
        assert_eq!(rational_roots(&e).unwrap(), vec![int(-2)]);
        assert_eq!(
            rational_roots(&Poly::from_ints(&[-1, 0, 1])).unwrap(),
            vec![int(-1), int(1)]
        );
        assert!(rational_roots(&Poly::zero()).is_err());
    }

    #[test]
    fn rational_roots_with_large_denominator() {
        // (100x - 129)(x^2 + 1)
        let p = &Poly::from_ints(&[-129, 100]) * &Poly::from_ints(&[1, 0, 1]);
        assert_eq!(rational_roots(&p).unwrap(), vec![frac(129, 100)]);
    }

    #[test]
    fn roots_in_sqrt33() {
        let k = FieldDescriptor::quadratic(33).unwrap();
        let e = Poly::new(vec![int(-1), int(0), frac(9, 4), int(1)]);
        let r = roots_in_field(&e, Some(&k)).unwrap();
        assert!(r.complete);
        assert_eq!(r.roots.len(), 3);
        let s = Elem::generator(&k);
        let u = &(&Elem::int(-1) + &s) * &Elem::frac(1, 8);
        assert!(r.roots.contains(&u));
        assert!(r.roots.contains(&Elem::int(-2)));
    }

    #[test]
    fn no_rational_root_of_three_sixteenths() {
        let p = Poly::new(vec![frac(-3, 16), int(0), int(1)]);
        let r = roots_in_field(&p, None).unwrap();
        assert!(r.roots.is_empty() && r.complete);
    }

    #[test]
    fn gaussian_roots() {
        let k = FieldDescriptor::gaussian();
        let r = roots_in_field(&Poly::from_ints(&[1, 0, 1]), Some(&k)).unwrap();
        let i = Elem::generator(&k);
        assert_eq!(r.roots, {
            let mut v = vec![i.clone(), -&i];
            v.sort();
            v
        });
    }

    #[test]
    fn cubic_field_roots() {
        let k = FieldDescriptor::new(&Poly::from_ints(&[-3, -1, -1, 1])).unwrap();
        let quartic = Poly::from_ints(&[9, 0, 2, -4, 1]);
        let r = roots_in_field(&quartic, Some(&k)).unwrap();
        assert!(r.complete);
        assert_eq!(r.roots, vec![Elem::generator(&k), Elem::int(3)]);
    }

    #[test]
    fn quartic_splitting_into_quadratics() {
        // (x^2 - 5)(x^2 + 1)
        let p = Poly::from_ints(&[-5, 0, -4, 0, 1]);
        let k5 = FieldDescriptor::quadratic(5).unwrap();
        let r = roots_in_field(&p, Some(&k5)).unwrap();
        assert!(r.complete);
        assert_eq!(r.roots.len(), 2);
        let ki = FieldDescriptor::gaussian();
        assert_eq!(roots_in_field(&p, Some(&ki)).unwrap().roots.len(), 2);
    }

    #[test]
    fn adjoin_quadratic_cofactor() {
        let q = Poly::from_ints(&[10, 3, 1]);
        let (k, z) = adjoin_root(&q).unwrap();
        assert_eq!(&z * &z, &(&Elem::int(-3) * &z) - &Elem::int(10));
        assert!(!k.is_real());
        assert!(adjoin_root(&Poly::from_ints(&[-1, 0, 1])).is_err());
    }

    #[test]
    fn degree_cap_enforced() {
        let p = Poly::from_ints(&[1, 0, 0, 0, 0, 0, 0, 1]);
        assert!(matches!(
            roots_in_field(&p, None),
            Err(Error::DegreeCap { .. })
        ));
    }
}
