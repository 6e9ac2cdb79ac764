//! Number fields Q[x]/(m(x)) and their elements.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rational::{frac, int, is_integer, rational_sqrt, squarefree_decompose, Rational};
use super::roots;
use super::sturm::{isolate_real_roots, refine};
use crate::error::{Error, Result};

/// Which complex root of the minimal polynomial the generator denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// The unique real root in the half-open interval `(lo, hi]`.
    Real { lo: Rational, hi: Rational },
    /// A non-real root; the field is stable under the conjugation of the pair.
    ComplexPair,
}

#[derive(Clone, Debug)]
pub struct FieldDescriptor {
    min_poly: Poly,
    embedding: Embedding,
    radicand: Option<BigInt>,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

impl Eq for FieldDescriptor {}

impl Hash for FieldDescriptor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.min_poly.hash(state);
    }
}

impl Ord for FieldDescriptor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.min_poly.cmp(&other.min_poly)
    }
}

impl PartialOrd for FieldDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FieldDescriptor {
    /// Builds Q[x]/(m) after certifying that `m` is irreducible of degree 2 to 4.
    ///
    /// The generator is the largest real root when one exists, otherwise a
    /// member of a complex-conjugate pair.
    pub fn new(min_poly: &Poly) -> Result<Arc<Self>> {
        let m = min_poly.monic();
        let deg = m.degree().ok_or(Error::ZeroPolynomial)?;
        if !(2..=4).contains(&deg) {
            return Err(Error::Unsupported(format!(
                "number field of degree {deg} (supported: 2..=4)"
            )));
        }
        if !roots::is_irreducible(&m)? {
            return Err(Error::Reducible(m.to_string()));
        }
        let isolated = isolate_real_roots(&m)?;
        let embedding = match isolated.last() {
            Some((lo, hi)) => {
                let (lo, hi) = refine(&m, lo.clone(), hi.clone(), &frac(1, 1 << 10));
                Embedding::Real { lo, hi }
            }
            None => Embedding::ComplexPair,
        };
        let radicand = (deg == 2 && m.coeff(1).is_zero() && is_integer(&m.coeff(0)))
            .then(|| -m.coeff(0).to_integer())
            .filter(|d| squarefree_decompose(d).0.is_one());
        Ok(Arc::new(FieldDescriptor {
            min_poly: m,
            embedding,
            radicand,
        }))
    }

    /// Q(sqrt(d)) presented by `x^2 - d'` with `d'` the squarefree part of `d`.
    pub fn quadratic(d: i64) -> Result<Arc<Self>> {
        let (_, f) = squarefree_decompose(&BigInt::from(d));
        if f.is_one() {
            return Err(Error::Reducible(format!("x^2 - {d}")));
        }
        FieldDescriptor::new(&Poly::new(vec![-Rational::from_integer(f), int(0), int(1)]))
    }

    pub fn gaussian() -> Arc<Self> {
        FieldDescriptor::quadratic(-1).expect("x^2 + 1 is irreducible")
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn is_real(&self) -> bool {
        matches!(self.embedding, Embedding::Real { .. })
    }

    /// `Some(d)` when the field is presented as `x^2 - d` with `d` squarefree.
    pub fn radicand(&self) -> Option<&BigInt> {
        self.radicand.as_ref()
    }

    pub fn generator_name(&self) -> String {
        match &self.radicand {
            Some(d) => format!("sqrt({d})"),
            None => "w".to_string(),
        }
    }

    /// Square root of `d` inside this field, following the generator's sign
    /// convention: for a quadratic `x^2 + bx + c` the generator is
    /// `(-b + sqrt(disc))/2`, so `sqrt(disc) = 2*gen + b`.
    pub fn sqrt_of(self: &Arc<Self>, d: &Rational) -> Option<Elem> {
        if let Some(r) = rational_sqrt(d) {
            return Some(Elem::rational(r));
        }
        let disc = self.min_poly.quadratic_discriminant()?;
        let k = rational_sqrt(&(d / &disc))?;
        let k = k.abs();
        let root_disc = Elem::from_poly(self, &Poly::new(vec![self.min_poly.coeff(1), int(2)]));
        Some(&root_disc * &Elem::rational(k))
    }

    pub fn name(&self) -> String {
        match &self.radicand {
            Some(d) => format!("Q(sqrt({d}))"),
            None => format!("Q[w]/({})", self.min_poly.to_string().replace('x', "w")),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Exact element of Q or of a number field.
///
/// Values that happen to be rational are always stored without a field, so
/// equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    field: Option<Arc<FieldDescriptor>>,
    coords: Vec<Rational>,
}

impl Elem {
    pub fn rational(q: Rational) -> Self {
        Elem {
            field: None,
            coords: vec![q],
        }
    }

    pub fn int(n: i64) -> Self {
        Elem::rational(int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Elem::rational(frac(n, d))
    }

    pub fn zero() -> Self {
        Elem::int(0)
    }

    pub fn one() -> Self {
        Elem::int(1)
    }

    pub fn generator(field: &Arc<FieldDescriptor>) -> Self {
        Elem::from_poly(field, &Poly::x())
    }

    /// Reduces `p` modulo the minimal polynomial.
    pub fn from_poly(field: &Arc<FieldDescriptor>, p: &Poly) -> Self {
        let r = p
            .rem(field.min_poly())
            .expect("minimal polynomial is nonzero");
        let coords: Vec<Rational> = (0..field.degree()).map(|i| r.coeff(i)).collect();
        Elem::normalized(Some(field.clone()), coords)
    }

    pub fn from_coords(
        field: Option<&Arc<FieldDescriptor>>,
        coords: Vec<Rational>,
    ) -> Result<Self> {
        match field {
            None if coords.len() == 1 => Ok(Elem::rational(coords[0].clone())),
            Some(f) if coords.len() == f.degree() => Ok(Elem::normalized(Some(f.clone()), coords)),
            _ => Err(Error::InvalidSet(
                "coordinate vector has wrong length".into(),
            )),
        }
    }

    fn normalized(field: Option<Arc<FieldDescriptor>>, mut coords: Vec<Rational>) -> Self {
        if coords.iter().skip(1).all(|c| c.is_zero()) {
            coords.truncate(1);
            if coords.is_empty() {
                coords.push(Rational::zero());
            }
            return Elem {
                field: None,
                coords,
            };
        }
        Elem { field, coords }
    }

    pub fn field(&self) -> Option<&Arc<FieldDescriptor>> {
        self.field.as_ref()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Coordinates padded to `len` entries.
    pub fn coords_padded(&self, len: usize) -> Vec<Rational> {
        let mut c = self.coords.clone();
        c.resize(len.max(c.len()), Rational::zero());
        c
    }

    pub fn is_rational(&self) -> bool {
        self.field.is_none()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.field.is_none().then(|| &self.coords[0])
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_none() && self.coords[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.field.is_none() && self.coords[0].is_one()
    }

    /// All coordinates are integers (membership in Z, Z[i], Z[sqrt d], ...).
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(is_integer)
    }

    /// Largest coordinate height.
    pub fn height(&self) -> BigInt {
        self.coords
            .iter()
            .map(super::rational::height)
            .max()
            .unwrap()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coords.clone())
    }

    pub fn common_field(a: &Elem, b: &Elem) -> Result<Option<Arc<FieldDescriptor>>> {
        match (&a.field, &b.field) {
            (None, None) => Ok(None),
            (Some(f), None) | (None, Some(f)) => Ok(Some(f.clone())),
            (Some(f), Some(g)) if f == g => Ok(Some(f.clone())),
            (Some(f), Some(g)) => Err(Error::FieldMismatch(f.name(), g.name())),
        }
    }

    pub fn checked_add(&self, other: &Elem) -> Result<Elem> {
        let field = Elem::common_field(self, other)?;
        let n = self.coords.len().max(other.coords.len());
        let a = self.coords_padded(n);
        let b = other.coords_padded(n);
        Ok(Elem::normalized(
            field,
            a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Elem) -> Result<Elem> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Elem) -> Result<Elem> {
        match Elem::common_field(self, other)? {
            None => Ok(Elem::rational(&self.coords[0] * &other.coords[0])),
            Some(f) => Ok(Elem::from_poly(&f, &(&self.to_poly() * &other.to_poly()))),
        }
    }

    pub fn inv(&self) -> Result<Elem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.field {
            None => Ok(Elem::rational(self.coords[0].recip())),
            Some(f) => {
                let (g, s) = self.to_poly().gcd_with_cofactor(f.min_poly());
                if g != Poly::one() {
                    return Err(Error::Reducible(f.min_poly().to_string()));
                }
                Ok(Elem::from_poly(f, &s))
            }
        }
    }

    pub fn checked_div(&self, other: &Elem) -> Result<Elem> {
        let _ = Elem::common_field(self, other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Elem {
        let mut acc = Elem::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates a rational polynomial at this element.
    pub fn eval_poly(&self, p: &Poly) -> Elem {
        p.coeffs().iter().rev().fold(Elem::zero(), |acc, c| {
            &(&acc * self) + &Elem::rational(c.clone())
        })
    }
}

impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords
            .cmp(&other.coords)
            .then_with(|| self.field.cmp(&other.field))
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for Elem {
    fn from(q: Rational) -> Self {
        Elem::rational(q)
    }
}

impl Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.checked_add(rhs).expect("operands share a field")
    }
}

impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.checked_sub(rhs).expect("operands share a field")
    }
}

impl Mul for &Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        self.checked_mul(rhs).expect("operands share a field")
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(field) = &self.field else {
            return write!(f, "{}", self.coords[0]);
        };
        let g = field.generator_name();
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let basis = vec![g.as_str(); i].join("*");
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => f.write_str(&basis)?,
                (_, false) => write!(f, "{a}*{basis}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt5_squared() {
        let k = FieldDescriptor::quadratic(5).unwrap();
        let s = Elem::generator(&k);
        let four_s = &Elem::int(4) * &s;
        assert_eq!(&four_s * &four_s, Elem::int(80));
    }

    #[test]
    fn gaussian_unit() {
        let i = Elem::generator(&FieldDescriptor::gaussian());
        assert_eq!(&i * &i, Elem::int(-1));
    }

    #[test]
    fn cubic_reduction() {
        let k = FieldDescriptor::new(&Poly::from_ints(&[-3, -1, -1, 1])).unwrap();
        let w = Elem::generator(&k);
        let w2 = &w * &w;
        let expected = Elem::from_poly(&k, &Poly::from_ints(&[3, 1, 1]));
        assert_eq!(&w * &w2, expected);
        assert!(k.is_real());
    }

    #[test]
    fn inverse_in_field() {
        let k = FieldDescriptor::quadratic(33).unwrap();
        let u = &(&Elem::int(-1) + &Elem::generator(&k)) * &Elem::frac(1, 8);
        assert_eq!(&u * &u.inv().unwrap(), Elem::one());
        assert!(Elem::zero().inv().is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Elem::generator(&FieldDescriptor::quadratic(5).unwrap());
        let b = Elem::generator(&FieldDescriptor::quadratic(3).unwrap());
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
        assert!(a.checked_add(&Elem::int(2)).is_ok());
    }

    #[test]
    fn reducible_polynomial_rejected() {
        assert!(FieldDescriptor::new(&Poly::from_ints(&[-4, 0, 1])).is_err());
        assert!(FieldDescriptor::new(&Poly::from_ints(&[-3, 1, -3, 1])).is_err());
        // (x^2+1)(x^2+2)
        assert!(FieldDescriptor::new(&Poly::from_ints(&[2, 0, 3, 0, 1])).is_err());
    }

    #[test]
    fn positive_square_root_convention() {
        let k = FieldDescriptor::quadratic(3).unwrap();
        match k.embedding() {
            Embedding::Real { lo, .. } => assert!(lo > &int(0)),
            _ => panic!("real field expected"),
        }
        assert_eq!(
            k.sqrt_of(&int(12)).unwrap(),
            &Elem::int(2) * &Elem::generator(&k)
        );
        assert_eq!(k.sqrt_of(&int(5)), None);
    }

    #[test]
    fn display_uses_generator_names() {
        let k = FieldDescriptor::quadratic(33).unwrap();
        let u = &(&Elem::int(-1) + &Elem::generator(&k)) * &Elem::frac(1, 8);
        assert_eq!(u.to_string(), "-1/8 + 1/8*sqrt(33)");
        let kw = FieldDescriptor::new(&Poly::from_ints(&[-3, -1, -1, 1])).unwrap();
        let w = Elem::generator(&kw);
        assert_eq!((&w * &w).to_string(), "w*w");
    }
}
