//! Solve strategies per universe, selected by ring tag through a registry.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Signed;

use crate::algebra::roots::{quadratic_factors, strip_rational_roots};
use crate::algebra::{
    adjoin_root, rational::is_integer, real_root_count, roots_in_field, Bound, Elem,
    FieldDescriptor, Poly, RingDomain,
};
use crate::error::{Error, Result};

/// The roots of one equation inside a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<Elem>,
    /// `true` when no other root lies in the universe.
    pub complete: bool,
    /// Short name of the argument used, recorded in traces.
    pub method: &'static str,
}

/// Which lemma rings may settle multivariate equations in a universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LemmaRing {
    Integers,
    Rationals,
}

impl LemmaRing {
    pub fn tag(self) -> &'static str {
        match self {
            LemmaRing::Integers => "Z",
            LemmaRing::Rationals => "Q",
        }
    }
}

pub trait Universe: Send + Sync {
    fn domain(&self) -> &RingDomain;

    fn contains(&self, e: &Elem) -> bool {
        self.domain().contains(e)
    }

    /// Roots in the universe of a univariate polynomial with rational
    /// coefficients (lowest degree first).
    fn roots(&self, p: &Poly) -> Result<RootSet>;

    /// Lemmas over these rings describe every solution lying in the universe.
    fn lemma_rings(&self) -> &'static [LemmaRing] {
        &[]
    }
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort();
    v.dedup();
    v
}

pub struct IntegerUniverse(RingDomain);
pub struct RationalUniverse(RingDomain);
pub struct RealUniverse(RingDomain);
pub struct ComplexUniverse(RingDomain);
pub struct GaussianUniverse(RingDomain);
pub struct FieldUniverse(RingDomain, Arc<FieldDescriptor>);

impl Universe for IntegerUniverse {
    fn domain(&self) -> &RingDomain {
        &self.0
    }

    fn roots(&self, p: &Poly) -> Result<RootSet> {
        let (rs, _) = strip_rational_roots(p)?;
        Ok(RootSet {
            roots: rs
                .into_iter()
                .filter(is_integer)
                .map(Elem::rational)
                .collect(),
            complete: true,
            method: "rationalRoots+integrality",
        })
    }

    fn lemma_rings(&self) -> &'static [LemmaRing] {
        // every rational solution set contains the integral ones
        &[LemmaRing::Integers, LemmaRing::Rationals]
    }
}

impl Universe for RationalUniverse {
    fn domain(&self) -> &RingDomain {
        &self.0
    }

    fn roots(&self, p: &Poly) -> Result<RootSet> {
        let (rs, _) = strip_rational_roots(p)?;
        Ok(RootSet {
            roots: rs.into_iter().map(Elem::rational).collect(),
            complete: true,
            method: "rationalRoots",
        })
    }

    fn lemma_rings(&self) -> &'static [LemmaRing] {
        &[LemmaRing::Rationals]
    }
}

/// Both roots of an irreducible monic-able quadratic in its own field.
fn quadratic_pair(q: &Poly) -> Result<[Elem; 2]> {
    let q = q.monic();
    let (_, z) = adjoin_root(&q)?;
    let other = &Elem::rational(-q.coeff(1)) - &z;
    Ok([z, other])
}

impl Universe for RealUniverse {
    fn domain(&self) -> &RingDomain {
        &self.0
    }

    /// Rational roots, then a Sturm count on the cofactor. Real irrational
    /// roots are representable only when the cofactor splits into quadratics.
    fn roots(&self, p: &Poly) -> Result<RootSet> {
        let (rs, cof) = strip_rational_roots(p)?;
        let mut roots: Vec<Elem> = rs.into_iter().map(Elem::rational).collect();
        if cof.degree().unwrap_or(0) == 0
            || real_root_count(&cof, &Bound::NegInf, &Bound::PosInf)? == 0
        {
            return Ok(RootSet {
                roots,
                complete: true,
                method: "rationalRoots+sturm",
            });
        }
        let complete = match quadratic_factors(&cof) {
            Some((quads, rest)) if rest.degree() == Some(0) => {
                for q in quads {
                    if q.quadratic_discriminant().unwrap().is_positive() {
                        roots.extend(quadratic_pair(&q)?);
                    }
                }
                true
            }
            _ => false,
        };
        Ok(RootSet {
            roots: sorted(roots),
            complete,
            method: "rationalRoots+sturm+quadratics",
        })
    }
}

impl Universe for ComplexUniverse {
    fn domain(&self) -> &RingDomain {
        &self.0
    }

    /// Rational roots plus both roots of each quadratic factor, each in the
    /// field obtained by adjoining it.
    fn roots(&self, p: &Poly) -> Result<RootSet> {
        let (rs, cof) = strip_rational_roots(p)?;
        let mut roots: Vec<Elem> = rs.into_iter().map(Elem::rational).collect();
        let complete = match cof.degree() {
            Some(0) => true,
            Some(2) => {
                roots.extend(quadratic_pair(&cof)?);
                true
            }
            _ => match quadratic_factors(&cof) {
                Some((quads, rest)) => {
                    for q in quads {
                        roots.extend(quadratic_pair(&q)?);
                    }
                    match rest.degree() {
                        Some(0) => true,
                        Some(2) => {
                            roots.extend(quadratic_pair(&rest)?);
                            true
                        }
                        _ => false,
                    }
                }
                None => false,
            },
        };
        Ok(RootSet {
            roots: sorted(roots),
            complete,
            method: "rationalRoots+adjoinRoot",
        })
    }
}

impl Universe for GaussianUniverse {
    fn domain(&self) -> &RingDomain {
        &self.0
    }

    fn roots(&self, p: &Poly) -> Result<RootSet> {
        let fr = roots_in_field(p, Some(&FieldDescriptor::gaussian()))?;
        Ok(RootSet {
            roots: fr.roots.into_iter().filter(Elem::is_integral).collect(),
            complete: fr.complete,
            method: "rootsInField+integrality",
        })
    }
}

impl Universe for FieldUniverse {
    fn domain(&self) -> &RingDomain {
        &self.0
    }

    fn roots(&self, p: &Poly) -> Result<RootSet> {
        let fr = roots_in_field(p, Some(&self.1))?;
        Ok(RootSet {
            roots: fr.roots,
            complete: fr.complete,
            method: "rootsInField",
        })
    }
}

type Factory = fn(&RingDomain) -> Box<dyn Universe>;

/// Maps a ring kind to its solve strategy.
pub struct UniverseRegistry {
    factories: BTreeMap<&'static str, Factory>,
}

fn kind(d: &RingDomain) -> &'static str {
    match d {
        RingDomain::Integers => "Z",
        RingDomain::Rationals => "Q",
        RingDomain::Reals => "R",
        RingDomain::Complexes => "C",
        RingDomain::GaussianIntegers => "Zi",
        RingDomain::NumberField(_) => "field",
    }
}

impl UniverseRegistry {
    pub fn empty() -> Self {
        UniverseRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, kind: &'static str, f: Factory) {
        self.factories.insert(kind, f);
    }

    pub fn kinds(&self) -> impl Iterator<Item = &&'static str> {
        self.factories.keys()
    }

    pub fn get(&self, d: &RingDomain) -> Result<Box<dyn Universe>> {
        self.factories
            .get(kind(d))
            .map(|f| f(d))
            .ok_or_else(|| Error::UnknownUniverse(d.tag()))
    }
}

impl Default for UniverseRegistry {
    fn default() -> Self {
        let mut r = UniverseRegistry::empty();
        r.register("Z", |d| Box::new(IntegerUniverse(d.clone())));
        r.register("Q", |d| Box::new(RationalUniverse(d.clone())));
        r.register("R", |d| Box::new(RealUniverse(d.clone())));
        r.register("C", |d| Box::new(ComplexUniverse(d.clone())));
        r.register("Zi", |d| Box::new(GaussianUniverse(d.clone())));
        r.register("field", |d| match d {
            RingDomain::NumberField(k) => Box::new(FieldUniverse(d.clone(), k.clone())),
            _ => unreachable!("registered for number fields only"),
        });
        r
    }
}

/// Strategy for `d` from the default registry.
pub fn universe(d: &RingDomain) -> Box<dyn Universe> {
    UniverseRegistry::default()
        .get(d)
        .expect("default registry covers every ring kind")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac, int};

    fn roots(tag: &str, p: &Poly) -> RootSet {
        universe(&tag.parse().unwrap()).roots(p).unwrap()
    }

    #[test]
    fn s3_equation_over_reals_and_gaussians() {
        let p = Poly::from_ints(&[-3, 1, -3, 1]);
        let r = roots("R", &p);
        assert!(r.complete);
        assert_eq!(r.roots, vec![Elem::int(3)]);
        let g = roots("Zi", &p);
        assert!(g.complete);
        assert_eq!(g.roots.len(), 3);
    }

    #[test]
    fn integrality_filter() {
        let p = Poly::from_ints(&[-1, 2]);
        assert!(roots("Z", &p).roots.is_empty());
        assert_eq!(roots("Q", &p).roots, vec![Elem::frac(1, 2)]);
    }

    #[test]
    fn complex_adjunction_for_j3() {
        let p = Poly::from_ints(&[-30, 1, 0, 1]);
        let r = roots("C", &p);
        assert!(r.complete);
        assert_eq!(r.roots.len(), 3);
        for z in &r.roots {
            let v = z.eval_poly(&p);
            assert!(v.is_zero());
        }
        assert!(roots("R", &p).complete);
    }

    #[test]
    fn real_quadratic_roots_are_adjoined() {
        let p = Poly::new(vec![int(-2), int(0), int(1)]);
        let r = roots("R", &p);
        assert!(r.complete);
        assert_eq!(r.roots.len(), 2);
        assert!(roots("Q", &Poly::new(vec![frac(-3, 16), int(0), int(1)]))
            .roots
            .is_empty());
    }

    #[test]
    fn registry_reports_missing_kind() {
        let reg = UniverseRegistry::empty();
        assert!(reg.get(&RingDomain::Integers).is_err());
    }
}
