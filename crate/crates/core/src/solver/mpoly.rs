//! Sparse multivariate polynomials with exact coefficients, keyed by symbol
//! number. Symbols stand for `f(e)` of not-yet-determined elements `e`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Elem, FieldDescriptor, Poly};
use crate::error::Result;

pub type Sym = u32;

/// A power product, stored as `(symbol, exponent)` pairs sorted by symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(Vec<(Sym, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(s: Sym) -> Self {
        Mono(vec![(s, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Sym, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort();
        let mut out: Vec<(Sym, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => out.push((s, e)),
            }
        }
        Mono(out)
    }

    pub fn pairs(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp(&self, s: Sym) -> u32 {
        self.0
            .binary_search_by_key(&s, |&(t, _)| t)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn without(&self, s: Sym) -> Mono {
        Mono(self.0.iter().copied().filter(|&(t, _)| t != s).collect())
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(s, e)), Some(&(t, f))) if s == t => {
                    out.push((s, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(s, e)), Some(&(t, _))) if s < t => {
                    out.push((s, e));
                    i += 1;
                }
                (Some(_), Some(&(t, f))) => {
                    out.push((t, f));
                    j += 1;
                }
                (Some(&p), None) => {
                    out.push(p);
                    i += 1;
                }
                (None, Some(&p)) => {
                    out.push(p);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Mono(out)
    }

    /// Graded lexicographic order; among equal degrees the smaller symbol
    /// dominates.
    pub fn grlex(&self, other: &Mono) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(s, e)), Some(&(t, f))) => {
                        if s != t {
                            return if s < t {
                                Ordering::Greater
                            } else {
                                Ordering::Less
                            };
                        }
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<Mono, Elem>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Elem) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        MPoly::constant(Elem::int(n))
    }

    pub fn var(s: Sym) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Mono::var(s), Elem::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Elem)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: Elem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Elem)> {
        self.terms.iter()
    }

    /// Terms from the leading one down, in graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Mono, &Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex(a.0));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Elem> {
        match self.terms.len() {
            0 => Some(Elem::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(s, _)| s))
            .collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: Sym) -> u32 {
        self.terms.keys().map(|m| m.exp(s)).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Mono, &Elem)> {
        self.terms.iter().max_by(|a, b| a.0.grlex(b.0))
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => {
                let inv = c.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &Elem) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `c * s + rest` with constant nonzero `c` and `rest` free of `s`.
    pub fn linear_in(&self, s: Sym) -> Option<(Elem, MPoly)> {
        if self.degree_in(s) != 1 {
            return None;
        }
        let mut coeff = None;
        let mut rest = MPoly::zero();
        for (m, c) in &self.terms {
            match m.exp(s) {
                0 => rest.add_term(m.clone(), c.clone()),
                _ if m.pairs().len() == 1 && coeff.is_none() => coeff = Some(c.clone()),
                _ => return None,
            }
        }
        coeff.map(|c| (c, rest))
    }

    /// Replaces every occurrence of `s` by `v`.
    pub fn substitute(&self, s: Sym, v: &MPoly) -> MPoly {
        if self.degree_in(s) == 0 {
            return self.clone();
        }
        let mut powers = vec![MPoly::int(1)];
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(s) as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * v;
                powers.push(next);
            }
            let rest = MPoly::from_terms([(m.without(s), c.clone())]);
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    pub fn substitute_all(&self, assign: &BTreeMap<Sym, MPoly>) -> MPoly {
        assign
            .iter()
            .fold(self.clone(), |p, (s, v)| p.substitute(*s, v))
    }

    /// Coefficients low to high when the only symbol is `s`.
    pub fn univariate(&self, s: Sym) -> Option<Vec<Elem>> {
        let syms = self.symbols();
        if syms.iter().any(|&t| t != s) {
            return None;
        }
        let d = self.degree_in(s) as usize;
        let mut out = vec![Elem::zero(); d + 1];
        for (m, c) in &self.terms {
            out[m.exp(s) as usize] = c.clone();
        }
        Some(out)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Elem::is_rational)
    }

    pub fn rational_univariate(&self, s: Sym) -> Option<Poly> {
        let cs = self.univariate(s)?;
        let qs: Option<Vec<_>> = cs.iter().map(|c| c.as_rational().cloned()).collect();
        qs.map(Poly::new)
    }

    /// The number field of the coefficients, if any coefficient is irrational.
    pub fn field(&self) -> Option<&Arc<FieldDescriptor>> {
        self.terms.values().find_map(Elem::field)
    }

    pub fn checked_field(&self, other: Option<&Arc<FieldDescriptor>>) -> Result<()> {
        if let (Some(a), Some(b)) = (self.field(), other) {
            if a != b {
                return Err(crate::Error::FieldMismatch(a.name(), b.name()));
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let coef = c.to_string();
            let compound = c.field().is_some();
            let (neg, body) = match coef.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, coef),
            };
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let mono: Vec<String> = m
                .pairs()
                .iter()
                .map(|&(s, e)| {
                    if e == 1 {
                        format!("s{s}")
                    } else {
                        format!("s{s}^{e}")
                    }
                })
                .collect();
            let body = if compound { format!("({body})") } else { body };
            match (mono.is_empty(), body.as_str()) {
                (true, _) => f.write_str(&body)?,
                (false, "1") => f.write_str(&mono.join("*"))?,
                (false, _) => write!(f, "{body}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    coef: Elem,
    mono: Vec<(Sym, u32)>,
}

/// A list of `{coef, mono: [[symbol, exponent], ...]}`, leading term first.
impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| TermWire {
                coef: c.clone(),
                mono: m.pairs().to_vec(),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermWire>::deserialize(d)?;
        Ok(MPoly::from_terms(
            terms
                .into_iter()
                .map(|t| (Mono::from_pairs(t.mono), t.coef)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(0)
    }
    fn y() -> MPoly {
        MPoly::var(1)
    }

    #[test]
    fn ring_identities() {
        let a = &(&x() + &y()).pow(2) - &(&(&x() * &x()) + &(&y() * &y()));
        assert_eq!(a, (&(&x() * &y()) * &MPoly::int(2)));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn substitution_and_linearity() {
        // s0^3 + s0 - 3*s0^2 - 3 at s0 = 3
        let p = &(&(&x().pow(3) + &x()) - &x().pow(2).scale(&Elem::int(3))) - &MPoly::int(3);
        assert!(p.substitute(0, &MPoly::int(3)).is_zero());
        let q = &(&y().scale(&Elem::int(2)) + &x().pow(2)) - &MPoly::int(1);
        let (c, rest) = q.linear_in(1).unwrap();
        assert_eq!(c, Elem::int(2));
        assert_eq!(rest, &x().pow(2) - &MPoly::int(1));
        assert!(q.linear_in(0).is_none());
        assert!((&x() * &y()).linear_in(1).is_none());
    }

    #[test]
    fn grlex_leading_term() {
        let p = &(&x().pow(2) + &(&x() * &y())) + &y().pow(3);
        assert_eq!(p.leading().unwrap().0, &Mono::from_pairs(vec![(1, 3)]));
        let q = &x().pow(2) + &(&x() * &y());
        assert_eq!(q.leading().unwrap().0, &Mono::from_pairs(vec![(0, 2)]));
        assert_eq!(p.to_string(), "s1^3 + s0^2 + s0*s1");
    }

    #[test]
    fn univariate_extraction() {
        let p = &x().pow(2).scale(&Elem::frac(9, 4)) - &MPoly::int(1);
        let u = p.rational_univariate(0).unwrap();
        assert_eq!(
            u,
            Poly::new(vec![
                crate::algebra::rational::int(-1),
                crate::algebra::rational::int(0),
                crate::algebra::rational::frac(9, 4)
            ])
        );
        assert!(p.univariate(1).is_none());
    }
}
