//! Cited Diophantine facts, matched against derived equations up to variable
//! renaming, sign changes and scaling.

pub mod sanity;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{is_integer, parse_rational};
use crate::algebra::{Elem, Rational};
use crate::error::{Error, Result};
use crate::expr::{parse_equation, Expr};
use crate::solver::mpoly::{MPoly, Mono, Sym};
use crate::solver::universe::LemmaRing;

pub use sanity::{sanity_check, SanityMethod, SanityRegistry, SanityReport};

pub const SHIPPED: &str = include_str!("../../data/lemmas.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub var: String,
    pub values: Vec<String>,
}

/// On-disk form of a lemma.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaSpec {
    pub id: String,
    pub equation: String,
    pub ring: String,
    #[serde(default)]
    pub solutions: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintSpec>,
    pub citation: String,
    pub sanity_bound: u64,
    pub fully_enumerable: bool,
    pub check: String,
}

#[derive(Clone, Debug)]
pub struct Lemma {
    pub id: String,
    pub equation: String,
    pub ring: LemmaRing,
    /// Variable names in sorted order; variable `i` is symbol `i` of `poly`.
    pub vars: Vec<String>,
    /// Canonical integer form of the equation.
    pub poly: MPoly,
    /// Each solution lists one value per variable.
    pub solutions: Vec<Vec<Rational>>,
    /// `(variable index, allowed values)`; other variables stay free.
    pub constraint: Option<(usize, Vec<Rational>)>,
    pub citation: String,
    pub sanity_bound: u64,
    pub fully_enumerable: bool,
    pub check: String,
}

/// Converts an expression over named variables into a polynomial, numbering
/// the names by their position in `vars`.
pub fn poly_from_expr(e: &Expr, vars: &[String]) -> Result<MPoly> {
    Ok(match e {
        Expr::Int(n) => MPoly::constant(Elem::rational(Rational::from_integer(n.clone()))),
        Expr::Name(n) => {
            let i = vars
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::Parse(format!("unknown variable `{n}`")))?;
            MPoly::var(i as Sym)
        }
        Expr::Sqrt(_) => {
            return Err(Error::Lemma(
                "radicals are not allowed in lemma equations".into(),
            ))
        }
        Expr::Neg(a) => -&poly_from_expr(a, vars)?,
        Expr::Add(a, b) => &poly_from_expr(a, vars)? + &poly_from_expr(b, vars)?,
        Expr::Sub(a, b) => &poly_from_expr(a, vars)? - &poly_from_expr(b, vars)?,
        Expr::Mul(a, b) => &poly_from_expr(a, vars)? * &poly_from_expr(b, vars)?,
        Expr::Div(a, b) => {
            let d = poly_from_expr(b, vars)?
                .as_constant()
                .ok_or_else(|| Error::Lemma("division by a non-constant".into()))?;
            poly_from_expr(a, vars)?.scale(&d.inv()?)
        }
        Expr::Pow(a, k) => poly_from_expr(a, vars)?.pow(*k),
    })
}

fn names(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Name(n) => {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        Expr::Neg(a) | Expr::Pow(a, _) => names(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            names(a, out);
            names(b, out);
        }
        Expr::Int(_) | Expr::Sqrt(_) => {}
    }
}

/// Clears denominators, divides by the content and makes the leading
/// coefficient (graded lex) positive. `None` for irrational coefficients.
pub fn canonical(p: &MPoly) -> Option<MPoly> {
    let mut coefs = Vec::new();
    for (_, c) in p.terms() {
        coefs.push(c.as_rational()?.clone());
    }
    if coefs.is_empty() {
        return Some(MPoly::zero());
    }
    let den = coefs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let num = coefs.iter().fold(BigInt::zero(), |g, c| {
        g.gcd(&(c.numer() * (&den / c.denom())))
    });
    let mut scale = Rational::new(den, num);
    if p.leading().unwrap().1.as_rational().unwrap().is_negative() {
        scale = -scale;
    }
    Some(p.scale(&Elem::rational(scale)))
}

/// Renames lemma variable `i` to `target[i].0` with sign `target[i].1`.
fn rename(p: &MPoly, target: &[(Sym, bool)]) -> MPoly {
    MPoly::from_terms(p.terms().map(|(m, c)| {
        let mut neg = false;
        let pairs = m
            .pairs()
            .iter()
            .map(|&(s, e)| {
                let (t, flip) = target[s as usize];
                neg ^= flip && e % 2 == 1;
                (t, e)
            })
            .collect();
        (Mono::from_pairs(pairs), if neg { -c } else { c.clone() })
    }))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl Lemma {
    pub fn from_spec(spec: &LemmaSpec) -> Result<Self> {
        let ring = match spec.ring.as_str() {
            "Z" => LemmaRing::Integers,
            "Q" => LemmaRing::Rationals,
            other => {
                return Err(Error::Lemma(format!(
                    "{}: unsupported ring `{other}`",
                    spec.id
                )))
            }
        };
        let expr = parse_equation(&spec.equation)?;
        let mut vars = Vec::new();
        names(&expr, &mut vars);
        vars.sort();
        let poly = canonical(&poly_from_expr(&expr, &vars)?).expect("rational coefficients");
        let value = |s: &str| parse_rational(s);
        let mut solutions = Vec::new();
        for sol in &spec.solutions {
            let mut row = Vec::new();
            for v in &vars {
                let s = sol
                    .get(v)
                    .ok_or_else(|| Error::Lemma(format!("{}: solution misses `{v}`", spec.id)))?;
                row.push(value(s)?);
            }
            solutions.push(row);
        }
        let constraint = match &spec.constraint {
            Some(c) => {
                let i = vars.iter().position(|v| *v == c.var).ok_or_else(|| {
                    Error::Lemma(format!("{}: unknown constraint variable", spec.id))
                })?;
                Some((i, c.values.iter().map(|s| value(s)).collect::<Result<_>>()?))
            }
            None => None,
        };
        let lemma = Lemma {
            id: spec.id.clone(),
            equation: spec.equation.clone(),
            ring,
            vars,
            poly,
            solutions,
            constraint,
            citation: spec.citation.clone(),
            sanity_bound: spec.sanity_bound,
            fully_enumerable: spec.fully_enumerable,
            check: spec.check.clone(),
        };
        lemma.check_solutions()?;
        Ok(lemma)
    }

    /// Every declared solution satisfies the equation and lies in the ring.
    pub fn check_solutions(&self) -> Result<()> {
        for sol in &self.solutions {
            if !self.eval(sol).is_zero() {
                return Err(Error::Lemma(format!(
                    "{}: {sol:?} is not a solution",
                    self.id
                )));
            }
            if self.ring == LemmaRing::Integers && !sol.iter().all(is_integer) {
                return Err(Error::Lemma(format!(
                    "{}: {sol:?} is not integral",
                    self.id
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut p = self.poly.clone();
        for (i, v) in point.iter().enumerate() {
            p = p.substitute(i as Sym, &MPoly::constant(Elem::rational(v.clone())));
        }
        p.as_constant()
            .and_then(|c| c.as_rational().cloned())
            .expect("full assignment leaves a rational constant")
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }
}

/// How the variables of a matched lemma correspond to the equation's symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub var: String,
    pub symbol: Sym,
    /// `true` when the symbol equals minus the lemma variable.
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaMatch {
    pub lemma: String,
    pub correspondence: Vec<Correspondence>,
    /// Each case assigns values to some of the equation's symbols.
    pub cases: Vec<Vec<(Sym, Elem)>>,
}

#[derive(Clone, Debug)]
pub struct LemmaBase {
    lemmas: Vec<Lemma>,
}

impl LemmaBase {
    pub fn from_json(s: &str) -> Result<Self> {
        let specs: Vec<LemmaSpec> = serde_json::from_str(s)?;
        let lemmas = specs
            .iter()
            .map(Lemma::from_spec)
            .collect::<Result<Vec<_>>>()?;
        Ok(LemmaBase { lemmas })
    }

    /// The lemma file shipped with the crate.
    pub fn shipped() -> Self {
        LemmaBase::from_json(SHIPPED).expect("shipped lemma file is valid")
    }

    pub fn empty() -> Self {
        LemmaBase { lemmas: Vec::new() }
    }

    pub fn lemmas(&self) -> &[Lemma] {
        &self.lemmas
    }

    pub fn get(&self, id: &str) -> Option<&Lemma> {
        self.lemmas.iter().find(|l| l.id == id)
    }

    /// A lemma whose equation agrees with `eq` up to renaming, sign changes of
    /// variables and a nonzero factor, with solutions pulled back to `eq`'s
    /// symbols. Only lemmas over `rings` are consulted; with `integral` set,
    /// non-integral cases are dropped.
    pub fn match_equation(
        &self,
        eq: &MPoly,
        rings: &[LemmaRing],
        integral: bool,
    ) -> Option<LemmaMatch> {
        let target = canonical(eq)?;
        let syms: Vec<Sym> = eq.symbols().into_iter().collect();
        for lemma in &self.lemmas {
            if !rings.contains(&lemma.ring) || lemma.arity() != syms.len() {
                continue;
            }
            if lemma.poly.total_degree() != target.total_degree() {
                continue;
            }
            for perm in permutations(syms.len()) {
                for signs in 0u32..(1 << syms.len()) {
                    let map: Vec<(Sym, bool)> = perm
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| (syms[j], signs >> i & 1 == 1))
                        .collect();
                    if canonical(&rename(&lemma.poly, &map)).as_ref() != Some(&target) {
                        continue;
                    }
                    return Some(pull_back(lemma, &map, integral));
                }
            }
        }
        None
    }
}

fn pull_back(lemma: &Lemma, map: &[(Sym, bool)], integral: bool) -> LemmaMatch {
    let val = |i: usize, v: &Rational| {
        let (s, neg) = map[i];
        (s, Elem::rational(if neg { -v } else { v.clone() }))
    };
    let keep = |v: &Rational| !integral || is_integer(v);
    let mut cases: Vec<Vec<(Sym, Elem)>> = Vec::new();
    for sol in &lemma.solutions {
        if !sol.iter().all(keep) {
            continue;
        }
        let mut case: Vec<(Sym, Elem)> = sol.iter().enumerate().map(|(i, v)| val(i, v)).collect();
        case.sort();
        cases.push(case);
    }
    if let Some((i, values)) = &lemma.constraint {
        for v in values.iter().filter(|v| keep(v)) {
            cases.push(vec![val(*i, v)]);
        }
    }
    cases.sort();
    cases.dedup();
    LemmaMatch {
        lemma: lemma.id.clone(),
        correspondence: map
            .iter()
            .enumerate()
            .map(|(i, &(symbol, negated))| Correspondence {
                var: lemma.vars[i].clone(),
                symbol,
                negated,
            })
            .collect(),
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str, vars: &[&str]) -> MPoly {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        poly_from_expr(&parse_equation(s).unwrap(), &vars).unwrap()
    }

    #[test]
    fn shipped_base_loads() {
        let b = LemmaBase::shipped();
        assert_eq!(b.lemmas().len(), 7);
        assert!(b.get("L4").unwrap().fully_enumerable);
        assert!(!b.get("L1").unwrap().fully_enumerable);
    }

    #[test]
    fn bachet_matches_with_renaming() {
        let b = LemmaBase::shipped();
        // symbols 4 and 9 play y and x
        let p = eq("b^2 + 2 - a^3", &["a", "b"]);
        let p = rename(&p, &[(9, false), (4, false)]);
        let m = b.match_equation(&p, &[LemmaRing::Integers], true).unwrap();
        assert_eq!(m.lemma, "L1");
        let three = Elem::int(3);
        assert!(m
            .cases
            .contains(&vec![(4, Elem::int(-5)), (9, three.clone())]));
        assert!(m.cases.contains(&vec![(4, Elem::int(5)), (9, three)]));
    }

    #[test]
    fn scaling_and_sign_invariance() {
        let b = LemmaBase::shipped();
        let p = eq("3/2*(x*y*z - x^2 - y^2 - 1)", &["x", "y", "z"]);
        let m = b.match_equation(&p, &[LemmaRing::Integers], true).unwrap();
        assert_eq!(m.lemma, "L2");
        // constraint on z pulls back to symbol 2
        assert_eq!(
            m.cases,
            vec![vec![(2, Elem::int(-3))], vec![(2, Elem::int(3))]]
        );
        let q = eq("(-x)^3 - y^2 - 2", &["x", "y"]);
        let m = b.match_equation(&q, &[LemmaRing::Integers], true).unwrap();
        assert!(m
            .cases
            .contains(&vec![(0, Elem::int(-3)), (1, Elem::int(5))]));
    }

    #[test]
    fn non_matches() {
        let b = LemmaBase::shipped();
        assert!(b
            .match_equation(
                &eq("x^3 - y^2 - 5", &["x", "y"]),
                &[LemmaRing::Integers],
                true
            )
            .is_none());
        // right shape, wrong ring
        assert!(b
            .match_equation(
                &eq("x^3 - y^2 - 2", &["x", "y"]),
                &[LemmaRing::Rationals],
                false
            )
            .is_none());
    }

    #[test]
    fn rejects_false_solution() {
        let spec = LemmaSpec {
            id: "bad".into(),
            equation: "x^2 = y + 1".into(),
            ring: "Z".into(),
            solutions: vec![[
                ("x".to_string(), "2".to_string()),
                ("y".to_string(), "2".to_string()),
            ]
            .into_iter()
            .collect()],
            constraint: None,
            citation: String::new(),
            sanity_bound: 1,
            fully_enumerable: false,
            check: "box-enumeration".into(),
        };
        assert!(Lemma::from_spec(&spec).is_err());
    }
}
