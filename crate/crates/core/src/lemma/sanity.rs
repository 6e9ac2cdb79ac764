//! Bounded enumerations that corroborate (or, for fully enumerable lemmas,
//! prove) the declared solution sets.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::Lemma;
use crate::algebra::rational::{divisors, exact_isqrt, is_integer, rational_sqrt};
use crate::algebra::{rational_roots, Elem, Rational};
use crate::error::{Error, Result};
use crate::solver::mpoly::{MPoly, Sym};
use crate::solver::universe::LemmaRing;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SanityReport {
    pub lemma: String,
    pub method: String,
    #[serde(serialize_with = "as_string")]
    pub bound: u64,
    /// Solutions met inside the bound, one value per lemma variable.
    pub found: Vec<Vec<String>>,
    /// For constrained lemmas: values the constrained variable took.
    pub constrained_values: Vec<String>,
    /// `true` when the enumeration covers every solution, making the check a
    /// proof rather than evidence.
    pub proof: bool,
}

pub trait SanityMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, lemma: &Lemma) -> Result<SanityReport>;
}

fn report(
    lemma: &Lemma,
    method: &str,
    found: BTreeSet<Vec<Rational>>,
    proof: bool,
) -> SanityReport {
    SanityReport {
        lemma: lemma.id.clone(),
        method: method.to_string(),
        bound: lemma.sanity_bound,
        found: found
            .into_iter()
            .map(|s| s.iter().map(|v| v.to_string()).collect())
            .collect(),
        constrained_values: Vec::new(),
        proof,
    }
}

fn at(p: &MPoly, s: Sym, v: &Rational) -> MPoly {
    p.substitute(s, &MPoly::constant(Elem::rational(v.clone())))
}

/// Rational roots of what is left of a two-variable lemma once `x` is fixed.
fn roots_in_last(p: &MPoly, last: Sym) -> Option<Vec<Rational>> {
    let u = p.rational_univariate(last)?;
    match u.degree() {
        None => None,
        Some(0) => Some(Vec::new()),
        // y^2 = c is by far the common shape; skip root isolation for it
        Some(2) if u.coeff(1).is_zero() => Some(match rational_sqrt(&(-u.coeff(0) / u.coeff(2))) {
            Some(r) if r.is_zero() => vec![r],
            Some(r) => vec![-r.clone(), r],
            None => Vec::new(),
        }),
        Some(_) => rational_roots(&u).ok(),
    }
}

fn int_range(b: u64) -> impl Iterator<Item = Rational> {
    let b = b as i64;
    (-b..=b).map(|i| Rational::from_integer(i.into()))
}

fn require_arity(lemma: &Lemma, n: usize, method: &str) -> Result<()> {
    if lemma.arity() != n {
        return Err(Error::Lemma(format!(
            "{}: {method} needs {n} variables, equation has {}",
            lemma.id,
            lemma.arity()
        )));
    }
    Ok(())
}

/// Every integer point of the box `|v| <= bound`. A proof when the equation
/// is a positive definite sum of even powers equal to a constant and the
/// bound reaches the largest admissible value of each variable.
pub struct BoxEnumeration;

impl BoxEnumeration {
    fn covering_bound(lemma: &Lemma) -> Option<u64> {
        let mut constant = Rational::zero();
        let mut terms = Vec::new();
        for (m, c) in lemma.poly.terms() {
            let c = c.as_rational()?.clone();
            match m.pairs() {
                [] => constant = c,
                [(_, e)] if e % 2 == 0 && c.is_positive() => terms.push((c, *e)),
                _ => return None,
            }
        }
        if terms.len() != lemma.arity() || !constant.is_negative() {
            return None;
        }
        let mut worst = 0u64;
        for (c, e) in terms {
            let cap = (-&constant / c).floor().to_integer();
            let mut r = 0u64;
            while BigInt::from(r + 1).pow(e) <= cap {
                r += 1;
            }
            worst = worst.max(r);
        }
        Some(worst)
    }
}

impl SanityMethod for BoxEnumeration {
    fn name(&self) -> &'static str {
        "box-enumeration"
    }

    fn run(&self, lemma: &Lemma) -> Result<SanityReport> {
        require_arity(lemma, 2, self.name())?;
        let mut found = BTreeSet::new();
        for x in int_range(lemma.sanity_bound) {
            let px = at(&lemma.poly, 0, &x);
            for y in int_range(lemma.sanity_bound) {
                if at(&px, 1, &y).is_zero() {
                    found.insert(vec![x.clone(), y]);
                }
            }
        }
        let proof = BoxEnumeration::covering_bound(lemma).is_some_and(|b| b <= lemma.sanity_bound);
        Ok(report(lemma, self.name(), found, proof))
    }
}

/// `x` over integers with `|x| <= bound`, solving for `y`.
pub struct IntegerScan;

impl SanityMethod for IntegerScan {
    fn name(&self) -> &'static str {
        "integer-scan"
    }

    fn run(&self, lemma: &Lemma) -> Result<SanityReport> {
        require_arity(lemma, 2, self.name())?;
        let mut found = BTreeSet::new();
        for x in int_range(lemma.sanity_bound) {
            let ys = roots_in_last(&at(&lemma.poly, 0, &x), 1)
                .ok_or_else(|| Error::Lemma(format!("{}: degenerate at x = {x}", lemma.id)))?;
            for y in ys.into_iter().filter(is_integer) {
                found.insert(vec![x.clone(), y]);
            }
        }
        Ok(report(lemma, self.name(), found, false))
    }
}

/// `x = p/q` over rationals of height at most `bound`, solving for `y`.
pub struct RationalScan;

impl SanityMethod for RationalScan {
    fn name(&self) -> &'static str {
        "rational-scan"
    }

    fn run(&self, lemma: &Lemma) -> Result<SanityReport> {
        require_arity(lemma, 2, self.name())?;
        let b = lemma.sanity_bound as i64;
        let mut found = BTreeSet::new();
        for q in 1..=b {
            for p in -b..=b {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let x = Rational::new(p.into(), q.into());
                let ys = roots_in_last(&at(&lemma.poly, 0, &x), 1)
                    .ok_or_else(|| Error::Lemma(format!("{}: degenerate at x = {x}", lemma.id)))?;
                for y in ys {
                    found.insert(vec![x.clone(), y]);
                }
            }
        }
        Ok(report(lemma, self.name(), found, false))
    }
}

/// `x^a * y^b = N`: `x^a` divides `N`, and the quotient must be a `b`-th
/// power. Always a proof.
pub struct DivisorAnalysis;

impl SanityMethod for DivisorAnalysis {
    fn name(&self) -> &'static str {
        "divisor-analysis"
    }

    fn run(&self, lemma: &Lemma) -> Result<SanityReport> {
        require_arity(lemma, 2, self.name())?;
        let shape = || Error::Lemma(format!("{}: expected x^a * y^b = N", lemma.id));
        let mut a = 0;
        let mut b = 0;
        let mut lead = None;
        let mut constant = None;
        for (m, c) in lemma.poly.terms() {
            let c = c.as_rational().ok_or_else(shape)?.clone();
            match m.pairs() {
                [] => constant = Some(c),
                [(0, e), (1, f)] => {
                    a = *e;
                    b = *f;
                    lead = Some(c);
                }
                _ => return Err(shape()),
            }
        }
        let (lead, constant) = (lead.ok_or_else(shape)?, constant.ok_or_else(shape)?);
        let n = -constant / lead;
        if !is_integer(&n) || n.is_zero() {
            return Err(shape());
        }
        let n = n.to_integer();
        let divs = divisors(&n.abs(), 10_000_000).ok_or_else(shape)?;
        let mut found = BTreeSet::new();
        for d in divs {
            for x in [d.clone(), -d] {
                let xa = x.pow(a);
                if !(&n % &xa).is_zero() {
                    continue;
                }
                let rest = &n / &xa;
                for y in integer_roots(&rest, b) {
                    found.insert(vec![
                        Rational::from_integer(x.clone()),
                        Rational::from_integer(y),
                    ]);
                }
            }
        }
        Ok(report(lemma, self.name(), found, true))
    }
}

/// Integers `y` with `y^k = n`.
fn integer_roots(n: &BigInt, k: u32) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::zero()];
    }
    if k == 2 {
        return match exact_isqrt(n) {
            Some(r) => vec![-r.clone(), r],
            None => Vec::new(),
        };
    }
    let mag = n.abs();
    let r = mag.nth_root(k);
    if r.pow(k) != mag {
        return Vec::new();
    }
    match (k % 2 == 0, n.is_negative()) {
        (true, true) => Vec::new(),
        (true, false) => vec![-r.clone(), r],
        (false, true) => vec![-r],
        (false, false) => vec![r],
    }
}

/// For lemmas that only constrain one variable: enumerate the others in a
/// box and record which values the constrained variable is forced to take.
pub struct ConstraintScan;

impl SanityMethod for ConstraintScan {
    fn name(&self) -> &'static str {
        "constraint-scan"
    }

    fn run(&self, lemma: &Lemma) -> Result<SanityReport> {
        let (ci, _) = lemma
            .constraint
            .as_ref()
            .ok_or_else(|| Error::Lemma(format!("{}: no constraint to scan", lemma.id)))?;
        let ci = *ci as Sym;
        let others: Vec<Sym> = (0..lemma.arity() as Sym).filter(|&s| s != ci).collect();
        let b = lemma.sanity_bound as i64;
        let mut seen = BTreeSet::new();
        let mut found = BTreeSet::new();
        let mut point = vec![-b; others.len()];
        loop {
            let mut p = lemma.poly.clone();
            for (s, v) in others.iter().zip(&point) {
                p = at(&p, *s, &Rational::from_integer((*v).into()));
            }
            match p.rational_univariate(ci) {
                Some(u) if u.is_zero() => {
                    return Err(Error::Lemma(format!(
                        "{}: constrained variable is free at {point:?}",
                        lemma.id
                    )))
                }
                Some(u) => {
                    let zs = if u.degree() == Some(0) {
                        Vec::new()
                    } else {
                        rational_roots(&u)?
                    };
                    for z in zs
                        .into_iter()
                        .filter(|z| lemma.ring == LemmaRing::Rationals || is_integer(z))
                    {
                        seen.insert(z.clone());
                        let mut sol: Vec<Rational> = Vec::new();
                        let mut k = 0;
                        for s in 0..lemma.arity() as Sym {
                            if s == ci {
                                sol.push(z.clone());
                            } else {
                                sol.push(Rational::from_integer(point[k].into()));
                                k += 1;
                            }
                        }
                        found.insert(sol);
                    }
                }
                None => unreachable!("only the constrained variable is left"),
            }
            if !advance(&mut point, b) {
                break;
            }
        }
        let mut r = report(lemma, self.name(), found, false);
        r.constrained_values = seen.iter().map(|v| v.to_string()).collect();
        Ok(r)
    }
}

/// Odometer step over `[-b, b]^n`; `false` once every point was visited.
fn advance(point: &mut [i64], b: i64) -> bool {
    for slot in point.iter_mut() {
        if *slot < b {
            *slot += 1;
            return true;
        }
        *slot = -b;
    }
    false
}

/// Named sanity methods.
pub struct SanityRegistry {
    methods: BTreeMap<&'static str, Box<dyn SanityMethod>>,
}

impl SanityRegistry {
    pub fn empty() -> Self {
        SanityRegistry {
            methods: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, m: Box<dyn SanityMethod>) {
        self.methods.insert(m.name(), m);
    }

    pub fn get(&self, name: &str) -> Option<&dyn SanityMethod> {
        self.methods.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &&'static str> {
        self.methods.keys()
    }
}

impl Default for SanityRegistry {
    fn default() -> Self {
        let mut r = SanityRegistry::empty();
        r.register(Box::new(BoxEnumeration));
        r.register(Box::new(IntegerScan));
        r.register(Box::new(RationalScan));
        r.register(Box::new(DivisorAnalysis));
        r.register(Box::new(ConstraintScan));
        r
    }
}

/// Runs the lemma's declared method and fails on any disagreement with the
/// declared solutions inside the bound.
pub fn sanity_check(lemma: &Lemma) -> Result<SanityReport> {
    let reg = SanityRegistry::default();
    let method = reg
        .get(&lemma.check)
        .ok_or_else(|| Error::Lemma(format!("{}: unknown check `{}`", lemma.id, lemma.check)))?;
    let rep = method.run(lemma)?;
    if lemma.fully_enumerable && !rep.proof {
        return Err(Error::Lemma(format!(
            "{}: declared fully enumerable but the bound does not cover every solution",
            lemma.id
        )));
    }
    match &lemma.constraint {
        Some((_, values)) => {
            let allowed: BTreeSet<String> = values.iter().map(|v| v.to_string()).collect();
            if let Some(v) = rep
                .constrained_values
                .iter()
                .find(|v| !allowed.contains(*v))
            {
                return Err(Error::Lemma(format!(
                    "{}: constrained variable takes {v} inside the bound",
                    lemma.id
                )));
            }
        }
        None => {
            let declared: BTreeSet<Vec<String>> = lemma
                .solutions
                .iter()
                .filter(|s| within(s, lemma.sanity_bound, lemma.check == "box-enumeration"))
                .map(|s| s.iter().map(|v| v.to_string()).collect())
                .collect();
            let found: BTreeSet<Vec<String>> = rep.found.iter().cloned().collect();
            if declared != found {
                return Err(Error::Lemma(format!(
                    "{}: enumeration found {found:?}, declared {declared:?}",
                    lemma.id
                )));
            }
        }
    }
    Ok(rep)
}

/// Scans only bound the first variable; boxes bound all of them.
fn as_string<S: serde::Serializer>(n: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn within(sol: &[Rational], bound: u64, all: bool) -> bool {
    let b = BigInt::from(bound);
    let n = if all { sol.len() } else { 1 };
    sol[..n]
        .iter()
        .all(|v| v.numer().abs() <= b && v.denom() <= &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemma::{LemmaBase, LemmaSpec};

    fn spec(id: &str) -> LemmaSpec {
        let all: Vec<LemmaSpec> = serde_json::from_str(crate::lemma::SHIPPED).unwrap();
        all.into_iter().find(|s| s.id == id).unwrap()
    }

    #[test]
    fn shipped_lemmas_pass() {
        for l in LemmaBase::shipped().lemmas() {
            let rep = sanity_check(l).unwrap_or_else(|e| panic!("{}: {e}", l.id));
            assert_eq!(rep.proof, l.fully_enumerable, "{}", l.id);
        }
    }

    #[test]
    fn missing_solution_is_caught() {
        let mut s = spec("L6");
        s.solutions.pop();
        assert!(sanity_check(&Lemma::from_spec(&s).unwrap()).is_err());
    }

    #[test]
    fn short_box_is_not_a_proof() {
        let mut s = spec("L7");
        s.sanity_bound = 20;
        s.solutions.clear();
        let l = Lemma::from_spec(&s).unwrap();
        assert!(!BoxEnumeration.run(&l).unwrap().proof);
        assert!(sanity_check(&l).is_err());
    }

    #[test]
    fn divisor_analysis_finds_both_signs() {
        let l = Lemma::from_spec(&spec("L4")).unwrap();
        let rep = DivisorAnalysis.run(&l).unwrap();
        assert_eq!(rep.found, vec![vec!["7", "-13"], vec!["7", "13"]]);
    }

    #[test]
    fn integer_roots_by_parity() {
        assert_eq!(integer_roots(&BigInt::from(-27), 3), vec![BigInt::from(-3)]);
        assert!(integer_roots(&BigInt::from(-4), 2).is_empty());
        assert!(integer_roots(&BigInt::from(17), 3).is_empty());
    }
}
