//! Brute-force witness search, used as an oracle against the engine.
//!
//! Values are assigned one element at a time; every triple with two known
//! entries forces the third, and square triples `(e, e, c)` offer only the
//! square roots of `f(c)`. Freely chosen values range over the elements of
//! height at most the bound, smallest first; forced values are not bounded.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{
    rational_roots, roots_in_field, Elem, FieldDescriptor, Poly, Rational, RingDomain,
};
use crate::error::{Error, Result};
use crate::nbhd::{is_arithmetic_on, moves, ArithmeticMap, ConstraintSystem, Neighborhood, Op};

/// Exact arithmetic of one codomain, as the search needs it.
trait SearchRing {
    type V: Clone + PartialEq + Debug;

    fn from_elem(&self, e: &Elem) -> Option<Self::V>;
    fn to_elem(&self, v: &Self::V) -> Elem;
    fn one(&self) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    /// `c / b` when it exists in the ring; `None` also for `b = 0`.
    fn div(&self, c: &Self::V, b: &Self::V) -> Result<Option<Self::V>>;
    fn halve(&self, c: &Self::V) -> Option<Self::V>;
    /// Every square root of `c` in the ring, or `None` when the ring cannot
    /// list them (the element is then enumerated instead).
    fn sqrt(&self, c: &Self::V) -> Result<Option<Vec<Self::V>>>;
    fn enumerate(&self, height: u64) -> Vec<Self::V>;
}

/// A codomain the oracle can search.
pub trait SearchBackend: Send + Sync {
    fn name(&self) -> &'static str;
    /// Values of a moving arithmetic map, by element index.
    fn search(
        &self,
        cs: &ConstraintSystem,
        target: usize,
        height: u64,
    ) -> Result<Option<Vec<Elem>>>;
}

fn overflow() -> Error {
    Error::Unsupported("search value left the 128-bit range".into())
}

/// `Z` and `Z[i]` as pairs of machine integers with checked arithmetic.
struct GaussianRing {
    imaginary: bool,
}

type G = (i128, i128);

impl GaussianRing {
    fn gaussian_sqrt(&self, (c, d): G) -> Result<Vec<G>> {
        // (a+bi)^2 = c+di: a^2+b^2 = |c+di|, a^2-b^2 = c, 2ab = d
        let norm = c
            .checked_mul(c)
            .and_then(|x| d.checked_mul(d).and_then(|y| x.checked_add(y)))
            .ok_or_else(overflow)?;
        let n = norm.sqrt();
        if n * n != norm || (n + c) % 2 != 0 {
            return Ok(Vec::new());
        }
        let (a2, b2) = ((n + c) / 2, (n - c) / 2);
        let (a, b) = (a2.sqrt(), b2.sqrt());
        if a * a != a2 || b * b != b2 {
            return Ok(Vec::new());
        }
        let b = if d < 0 { -b } else { b };
        if 2 * a * b != d {
            return Ok(Vec::new());
        }
        Ok(if a == 0 && b == 0 {
            vec![(0, 0)]
        } else {
            vec![(a, b), (-a, -b)]
        })
    }
}

impl SearchRing for GaussianRing {
    type V = G;

    fn from_elem(&self, e: &Elem) -> Option<G> {
        let int = |q: &Rational| q.is_integer().then(|| q.to_integer().to_i128()).flatten();
        match e.field() {
            None => Some((int(&e.coords()[0])?, 0)),
            Some(k) if self.imaginary && **k == *FieldDescriptor::gaussian() => {
                Some((int(&e.coords()[0])?, int(&e.coords()[1])?))
            }
            _ => None,
        }
    }

    fn to_elem(&self, &(a, b): &G) -> Elem {
        let q = |x: i128| Rational::from_integer(BigInt::from(x));
        if b == 0 {
            return Elem::rational(q(a));
        }
        Elem::from_coords(Some(&FieldDescriptor::gaussian()), vec![q(a), q(b)])
            .expect("two coordinates")
    }

    fn one(&self) -> G {
        (1, 0)
    }

    fn add(&self, a: &G, b: &G) -> Result<G> {
        Ok((
            a.0.checked_add(b.0).ok_or_else(overflow)?,
            a.1.checked_add(b.1).ok_or_else(overflow)?,
        ))
    }

    fn sub(&self, a: &G, b: &G) -> Result<G> {
        Ok((
            a.0.checked_sub(b.0).ok_or_else(overflow)?,
            a.1.checked_sub(b.1).ok_or_else(overflow)?,
        ))
    }

    fn mul(&self, a: &G, b: &G) -> Result<G> {
        let m = |x: i128, y: i128| x.checked_mul(y).ok_or_else(overflow);
        let re = m(a.0, b.0)?
            .checked_sub(m(a.1, b.1)?)
            .ok_or_else(overflow)?;
        let im = m(a.0, b.1)?
            .checked_add(m(a.1, b.0)?)
            .ok_or_else(overflow)?;
        Ok((re, im))
    }

    fn div(&self, c: &G, b: &G) -> Result<Option<G>> {
        if *b == (0, 0) {
            return Ok(None);
        }
        let conj = (b.0, -b.1);
        let num = self.mul(c, &conj)?;
        let den = self.mul(b, &conj)?.0;
        if num.0 % den != 0 || num.1 % den != 0 {
            return Ok(None);
        }
        Ok(Some((num.0 / den, num.1 / den)))
    }

    fn halve(&self, c: &G) -> Option<G> {
        (c.0 % 2 == 0 && c.1 % 2 == 0).then_some((c.0 / 2, c.1 / 2))
    }

    fn sqrt(&self, c: &G) -> Result<Option<Vec<G>>> {
        let roots = self.gaussian_sqrt(*c)?;
        Ok(Some(if self.imaginary {
            roots
        } else {
            roots.into_iter().filter(|r| r.1 == 0).collect()
        }))
    }

    fn enumerate(&self, height: u64) -> Vec<G> {
        let h = height as i128;
        let mut out = Vec::new();
        let ints = |k: i128| if k == 0 { vec![0] } else { vec![k, -k] };
        for k in 0..=h {
            if !self.imaginary {
                out.extend(ints(k).into_iter().map(|a| (a, 0)));
                continue;
            }
            // the ring of values with max(|a|, |b|) = k
            for a in -k..=k {
                for b in -k..=k {
                    if a.abs().max(b.abs()) == k {
                        out.push((a, b));
                    }
                }
            }
        }
        out.sort_by_key(|&(a, b)| {
            (
                a.abs().max(b.abs()),
                a.abs() + b.abs(),
                b != 0,
                a < 0,
                b < 0,
            )
        });
        out
    }
}

/// `Q` or a number field, with exact [`Elem`] arithmetic.
struct ElemRing {
    field: Option<Arc<FieldDescriptor>>,
}

impl ElemRing {
    fn rationals(height: u64) -> Vec<Rational> {
        let h = height as i64;
        let mut out = vec![Rational::zero()];
        let mut seen = std::collections::BTreeSet::new();
        for k in 1..=h {
            for q in 1..=k {
                for p in [k, -k] {
                    let x = Rational::new(p.into(), q.into());
                    if seen.insert(x.clone()) {
                        out.push(x);
                    }
                }
                if q < k {
                    for p in [q, -q] {
                        let x = Rational::new(p.into(), k.into());
                        if seen.insert(x.clone()) {
                            out.push(x);
                        }
                    }
                }
            }
        }
        out
    }
}

impl SearchRing for ElemRing {
    type V = Elem;

    fn from_elem(&self, e: &Elem) -> Option<Elem> {
        match (e.field(), &self.field) {
            (None, _) => Some(e.clone()),
            (Some(a), Some(b)) if a == b => Some(e.clone()),
            _ => None,
        }
    }

    fn to_elem(&self, v: &Elem) -> Elem {
        v.clone()
    }

    fn one(&self) -> Elem {
        Elem::one()
    }

    fn add(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        a.checked_add(b)
    }

    fn sub(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        a.checked_sub(b)
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        a.checked_mul(b)
    }

    fn div(&self, c: &Elem, b: &Elem) -> Result<Option<Elem>> {
        if b.is_zero() {
            return Ok(None);
        }
        c.checked_div(b).map(Some)
    }

    fn halve(&self, c: &Elem) -> Option<Elem> {
        c.checked_mul(&Elem::frac(1, 2)).ok()
    }

    fn sqrt(&self, c: &Elem) -> Result<Option<Vec<Elem>>> {
        let Some(q) = c.as_rational() else {
            return Ok(None);
        };
        let p = Poly::new(vec![-q.clone(), Rational::zero(), Rational::one()]);
        Ok(Some(match &self.field {
            None => rational_roots(&p)?
                .into_iter()
                .map(Elem::rational)
                .collect(),
            Some(k) => roots_in_field(&p, Some(k))?.roots,
        }))
    }

    fn enumerate(&self, height: u64) -> Vec<Elem> {
        let qs = ElemRing::rationals(height);
        match &self.field {
            None => qs.into_iter().map(Elem::rational).collect(),
            Some(k) => {
                let mut out = Vec::new();
                let d = k.degree();
                let mut digits = vec![0usize; d];
                loop {
                    let coords = digits.iter().map(|&i| qs[i].clone()).collect();
                    out.push(Elem::from_coords(Some(k), coords).expect("right length"));
                    let mut i = 0;
                    loop {
                        if i == d {
                            out.sort_by_key(|e| e.height());
                            return out;
                        }
                        digits[i] += 1;
                        if digits[i] < qs.len() {
                            break;
                        }
                        digits[i] = 0;
                        i += 1;
                    }
                }
            }
        }
    }
}

/// Whether a value list is a complete consistent prefix.
enum Propagation {
    Consistent,
    Conflict,
}

struct Backtrack<'a, R: SearchRing> {
    ring: &'a R,
    cs: &'a ConstraintSystem,
    target: usize,
    /// `r` itself when it lies in the ring.
    r: Option<R::V>,
    candidates: Vec<R::V>,
}

impl<R: SearchRing> Backtrack<'_, R> {
    fn forced(&self, vals: &mut [Option<R::V>]) -> Result<Propagation> {
        loop {
            let mut changed = false;
            for t in self.cs.triples() {
                let (a, b, c) = (vals[t.a].clone(), vals[t.b].clone(), vals[t.c].clone());
                let ring = self.ring;
                let derived = match (t.op, a, b, c) {
                    (Op::Add, Some(x), Some(y), Some(z)) => {
                        if ring.add(&x, &y)? != z {
                            return Ok(Propagation::Conflict);
                        }
                        None
                    }
                    (Op::Mul, Some(x), Some(y), Some(z)) => {
                        if ring.mul(&x, &y)? != z {
                            return Ok(Propagation::Conflict);
                        }
                        None
                    }
                    (Op::Add, Some(x), Some(y), None) => Some((t.c, Some(ring.add(&x, &y)?))),
                    (Op::Add, None, _, Some(z)) if t.a == t.b => Some((t.a, ring.halve(&z))),
                    (Op::Add, None, Some(y), Some(z)) => Some((t.a, Some(ring.sub(&z, &y)?))),
                    (Op::Add, Some(x), None, Some(z)) => Some((t.b, Some(ring.sub(&z, &x)?))),
                    (Op::Mul, Some(x), Some(y), None) => Some((t.c, Some(ring.mul(&x, &y)?))),
                    (Op::Mul, None, Some(y), Some(z)) if t.a != t.b && y != ring.sub(&y, &y)? => {
                        Some((t.a, ring.div(&z, &y)?))
                    }
                    (Op::Mul, Some(x), None, Some(z)) if x != ring.sub(&x, &x)? => {
                        Some((t.b, ring.div(&z, &x)?))
                    }
                    _ => None,
                };
                match derived {
                    None => {}
                    // the forced value does not exist in the ring
                    Some((_, None)) => return Ok(Propagation::Conflict),
                    Some((i, Some(v))) => {
                        vals[i] = Some(v);
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(Propagation::Consistent);
            }
        }
    }

    fn choices(&self, vals: &[Option<R::V>]) -> Result<(usize, Vec<R::V>)> {
        let unassigned: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_none()).collect();
        for &e in &unassigned {
            if let Some(t) = self
                .cs
                .mul
                .iter()
                .find(|t| t.a == e && t.b == e && vals[t.c].is_some())
            {
                let c = vals[t.c].as_ref().expect("checked");
                if let Some(roots) = self.ring.sqrt(c)? {
                    return Ok((e, roots));
                }
            }
        }
        // the element sharing most triples with assigned ones
        let touching = |e: usize| {
            self.cs
                .triples()
                .filter(|t| [t.a, t.b, t.c].contains(&e))
                .filter(|t| [t.a, t.b, t.c].iter().any(|&i| vals[i].is_some()))
                .count()
        };
        let e = *unassigned
            .iter()
            .max_by_key(|&&e| (touching(e), std::cmp::Reverse(e)))
            .expect("some element unassigned");
        Ok((e, self.candidates.clone()))
    }

    fn run(&self, mut vals: Vec<Option<R::V>>) -> Result<Option<Vec<R::V>>> {
        if let Propagation::Conflict = self.forced(&mut vals)? {
            return Ok(None);
        }
        if vals[self.target].is_some() && vals[self.target] == self.r {
            return Ok(None);
        }
        if vals.iter().all(Option::is_some) {
            return Ok(Some(
                vals.into_iter().map(|v| v.expect("all assigned")).collect(),
            ));
        }
        let (e, options) = self.choices(&vals)?;
        for v in options {
            let mut next = vals.clone();
            next[e] = Some(v);
            if let Some(found) = self.run(next)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

fn backtrack<R: SearchRing>(
    ring: &R,
    cs: &ConstraintSystem,
    target: usize,
    height: u64,
) -> Result<Option<Vec<Elem>>> {
    let search = Backtrack {
        ring,
        cs,
        target,
        r: ring.from_elem(&cs.symbols[target]),
        candidates: ring.enumerate(height),
    };
    let mut vals = vec![None; cs.symbols.len()];
    if let Some(u) = cs.unit {
        vals[u] = Some(ring.one());
    }
    Ok(search
        .run(vals)?
        .map(|vs| vs.iter().map(|v| ring.to_elem(v)).collect()))
}

struct IntegerBackend;
struct GaussianBackend;
struct FieldBackend(Option<Arc<FieldDescriptor>>);

impl SearchBackend for IntegerBackend {
    fn name(&self) -> &'static str {
        "Z"
    }
    fn search(
        &self,
        cs: &ConstraintSystem,
        target: usize,
        height: u64,
    ) -> Result<Option<Vec<Elem>>> {
        backtrack(&GaussianRing { imaginary: false }, cs, target, height)
    }
}

impl SearchBackend for GaussianBackend {
    fn name(&self) -> &'static str {
        "Zi"
    }
    fn search(
        &self,
        cs: &ConstraintSystem,
        target: usize,
        height: u64,
    ) -> Result<Option<Vec<Elem>>> {
        backtrack(&GaussianRing { imaginary: true }, cs, target, height)
    }
}

impl SearchBackend for FieldBackend {
    fn name(&self) -> &'static str {
        if self.0.is_some() {
            "field"
        } else {
            "Q"
        }
    }
    fn search(
        &self,
        cs: &ConstraintSystem,
        target: usize,
        height: u64,
    ) -> Result<Option<Vec<Elem>>> {
        backtrack(
            &ElemRing {
                field: self.0.clone(),
            },
            cs,
            target,
            height,
        )
    }
}

type BackendFactory = fn(&RingDomain) -> Box<dyn SearchBackend>;

/// Search strategies by codomain kind.
pub struct SearchRegistry {
    factories: BTreeMap<&'static str, BackendFactory>,
}

impl SearchRegistry {
    pub fn empty() -> Self {
        SearchRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, kind: &'static str, f: BackendFactory) {
        self.factories.insert(kind, f);
    }

    pub fn get(&self, codomain: &RingDomain) -> Result<Box<dyn SearchBackend>> {
        let kind = match codomain {
            RingDomain::Integers => "Z",
            RingDomain::GaussianIntegers => "Zi",
            RingDomain::Rationals => "Q",
            RingDomain::NumberField(_) => "field",
            other => return Err(Error::Unsupported(format!("witness search over {other}"))),
        };
        self.factories
            .get(kind)
            .map(|f| f(codomain))
            .ok_or_else(|| Error::UnknownUniverse(codomain.tag()))
    }
}

impl Default for SearchRegistry {
    fn default() -> Self {
        let mut r = SearchRegistry::empty();
        r.register("Z", |_| Box::new(IntegerBackend));
        r.register("Zi", |_| Box::new(GaussianBackend));
        r.register("Q", |_| Box::new(FieldBackend(None)));
        r.register("field", |d| Box::new(FieldBackend(d.field())));
        r
    }
}

/// An arithmetic map `set -> codomain` moving the distinguished element,
/// found by exhaustive search with freely chosen values of height at most
/// `height`. The result is validated before it is returned.
pub fn search_witness(
    set: &Neighborhood,
    codomain: &RingDomain,
    height: u64,
) -> Result<Option<ArithmeticMap>> {
    if height == 0 {
        return Err(Error::Parse("height bound must be at least 1".into()));
    }
    let backend = SearchRegistry::default().get(codomain)?;
    let cs = ConstraintSystem::extract(set);
    let Some(values) = backend.search(&cs, set.distinguished_index(), height)? else {
        return Ok(None);
    };
    let map = ArithmeticMap::from_pairs(codomain.clone(), cs.symbols.iter().cloned().zip(values));
    if is_arithmetic_on(&map, &cs)?.is_some() || !moves(&map, set.distinguished())? {
        return Err(Error::Unsupported(
            "search produced an invalid witness".into(),
        ));
    }
    Ok(Some(map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64], r: i64) -> Neighborhood {
        Neighborhood::new(xs.iter().map(|&x| Elem::int(x)).collect(), Elem::int(r)).unwrap()
    }

    #[test]
    fn s3_moves_in_gaussian_integers_only() {
        let s3 = set(&[1, 10, 20, 30, 3, 9, 27], 3);
        let w = search_witness(&s3, &RingDomain::GaussianIntegers, 2)
            .unwrap()
            .unwrap();
        let i = Elem::generator(&FieldDescriptor::gaussian());
        assert!(w.get(&Elem::int(3)) == Some(&i) || w.get(&Elem::int(3)) == Some(&-&i));
        assert!(search_witness(&s3, &RingDomain::Rationals, 3)
            .unwrap()
            .is_none());
    }

    #[test]
    fn zero_is_forced() {
        let z = set(&[0], 0);
        assert!(search_witness(&z, &RingDomain::Integers, 1)
            .unwrap()
            .is_none());
    }

    #[test]
    fn gaussian_square_roots() {
        let g = GaussianRing { imaginary: true };
        assert_eq!(g.sqrt(&(-1, 0)).unwrap().unwrap(), vec![(0, 1), (0, -1)]);
        assert_eq!(g.sqrt(&(3, 4)).unwrap().unwrap(), vec![(2, 1), (-2, -1)]);
        assert!(g.sqrt(&(2, 0)).unwrap().unwrap().is_empty());
        let z = GaussianRing { imaginary: false };
        assert!(z.sqrt(&(-1, 0)).unwrap().unwrap().is_empty());
    }

    #[test]
    fn rational_enumeration_by_height() {
        let qs = ElemRing::rationals(2);
        assert_eq!(qs.len(), 7);
        assert!(qs.contains(&Rational::new(1.into(), 2.into())));
    }
}
