//! Independent checker for `fixed` traces.
//!
//! The checker shares no logic with the engine beyond exact arithmetic and
//! root finding. It re-derives every recorded value, insists that steps visit
//! branches in depth-first order, and accepts only when every branch it
//! opened was closed by a contradiction, a membership failure or `f(r) = r`.

use std::collections::{BTreeMap, BTreeSet};

use super::mpoly::{MPoly, Sym};
use super::trace::{Case, Rule, Step, Trace};
use super::universe::universe;
use crate::algebra::{Elem, RingDomain};
use crate::error::{Error, Result};
use crate::lemma::LemmaBase;
use crate::nbhd::{ConstraintSystem, Neighborhood, Op, Triple};

#[derive(Clone)]
struct State {
    values: Vec<Option<MPoly>>,
    eqs: BTreeMap<u64, MPoly>,
    /// Cases announced by the last solve step, awaiting their split.
    pending: Option<Vec<Vec<(Sym, Elem)>>>,
}

impl State {
    fn assign(&mut self, s: Sym, v: &MPoly) {
        for p in self.values.iter_mut().flatten() {
            *p = p.substitute(s, v);
        }
        self.eqs = std::mem::take(&mut self.eqs)
            .into_iter()
            .map(|(id, p)| (id, p.substitute(s, v)))
            .filter(|(_, p)| !p.is_zero())
            .map(|(id, p)| (id, p.monic()))
            .collect();
    }
}

struct Checker<'a> {
    cs: ConstraintSystem,
    target: usize,
    domain: RingDomain,
    lemmas: &'a LemmaBase,
    degree_cap: usize,
    /// Branches created but not yet opened, next one last.
    stack: Vec<(String, State)>,
    current: Option<(String, State)>,
    next_sym: Sym,
    next_eq: u64,
    applied: BTreeSet<String>,
}

fn fail<T>(step: usize, reason: impl Into<String>) -> Result<T> {
    Err(Error::Replay {
        step,
        reason: reason.into(),
    })
}

fn known(st: &State, i: usize) -> Option<&MPoly> {
    st.values.get(i).and_then(Option::as_ref)
}

/// The element and value a rule yields from the current values.
fn derive(st: &State, rule: Rule, t: &Triple) -> Option<(usize, MPoly)> {
    let (a, b, c) = (known(st, t.a), known(st, t.b), known(st, t.c));
    let constant_inverse = |p: &MPoly| {
        p.as_constant()
            .filter(|c| !c.is_zero())
            .and_then(|c| c.inv().ok())
    };
    match (t.op, rule) {
        (Op::Add, Rule::Zero) if t.a == t.b && t.b == t.c => Some((t.a, MPoly::zero())),
        (Op::Add, Rule::Sum) => Some((t.c, a? + b?)),
        (Op::Add, Rule::Half) if t.a == t.b => Some((t.a, c?.scale(&Elem::frac(1, 2)))),
        (Op::Add, Rule::DiffA) => Some((t.a, c? - b?)),
        (Op::Add, Rule::DiffB) => Some((t.b, c? - a?)),
        (Op::Mul, Rule::Product) => Some((t.c, a? * b?)),
        (Op::Mul, Rule::QuotientA) if t.a != t.b => Some((t.a, c?.scale(&constant_inverse(b?)?))),
        (Op::Mul, Rule::QuotientB) => Some((t.b, c?.scale(&constant_inverse(a?)?))),
        _ => None,
    }
}

impl Checker<'_> {
    fn state(&mut self, i: usize, branch: &str) -> Result<&mut State> {
        match &mut self.current {
            Some((path, st)) if path == branch => Ok(st),
            Some((path, _)) => fail(
                i,
                format!("step names branch {branch} while {path} is open"),
            ),
            None => fail(
                i,
                format!("step names branch {branch} but no branch is open"),
            ),
        }
    }

    fn close(&mut self) {
        self.current = None;
    }

    fn step(&mut self, i: usize, step: &Step) -> Result<()> {
        if !matches!(
            step,
            Step::SolveUnivariate { .. } | Step::ApplyLemma { .. } | Step::CaseSplit { .. }
        ) {
            if let Some((_, st)) = &mut self.current {
                if st.pending.is_some() {
                    return fail(i, "a solve step must be followed by its case split");
                }
            }
        }
        match step {
            Step::Branch { branch } => {
                if self.current.is_some() {
                    return fail(i, "previous branch is still open");
                }
                match self.stack.pop() {
                    Some((path, st)) if &path == branch => self.current = Some((path, st)),
                    Some((path, _)) => {
                        return fail(i, format!("expected branch {path}, got {branch}"))
                    }
                    None => return fail(i, "no branch left to open"),
                }
            }
            Step::Propagate {
                branch,
                rule,
                triple,
                element,
                value,
            } => {
                let unit = self.cs.unit;
                let triple_ok = triple.map_or(true, |t| self.cs.contains(&t));
                let st = self.state(i, branch)?;
                let (target, expected) = match (rule, triple) {
                    (Rule::Unit, None) if unit == Some(*element) => (*element, MPoly::int(1)),
                    (_, Some(t)) if triple_ok => match derive(st, *rule, t) {
                        Some(d) => d,
                        None => return fail(i, "rule does not apply to the triple"),
                    },
                    _ => return fail(i, "rule and triple do not fit the constraint system"),
                };
                if target != *element || expected != *value {
                    return fail(i, "propagated value does not follow");
                }
                match st.values.get_mut(target) {
                    Some(slot @ None) => *slot = Some(expected),
                    _ => return fail(i, "element already has a value"),
                }
            }
            Step::IntroduceSymbol {
                branch,
                symbol,
                element,
            } => {
                if *symbol != self.next_sym {
                    return fail(i, "symbols must be numbered consecutively");
                }
                self.next_sym += 1;
                let st = self.state(i, branch)?;
                match st.values.get_mut(*element) {
                    Some(slot @ None) => *slot = Some(MPoly::var(*symbol)),
                    _ => return fail(i, "element already has a value"),
                }
            }
            Step::Equation {
                branch,
                id,
                triple,
                poly,
            } => {
                if *id != self.next_eq {
                    return fail(i, "equations must be numbered consecutively");
                }
                self.next_eq += 1;
                if !self.cs.contains(triple) {
                    return fail(i, "triple is not a constraint");
                }
                let st = self.state(i, branch)?;
                let (Some(a), Some(b), Some(c)) = (
                    known(st, triple.a),
                    known(st, triple.b),
                    known(st, triple.c),
                ) else {
                    return fail(i, "equation before all three values are known");
                };
                let lhs = match triple.op {
                    Op::Add => a + b,
                    Op::Mul => a * b,
                };
                let residual = &lhs - c;
                if residual.is_zero() || residual.monic() != *poly {
                    return fail(i, "equation does not match the triple");
                }
                st.eqs.insert(*id, poly.clone());
            }
            Step::SolveLinear {
                branch,
                equation,
                symbol,
                value,
            } => {
                let st = self.state(i, branch)?;
                let Some(p) = st.eqs.remove(equation) else {
                    return fail(i, "no such equation");
                };
                let Some((c, rest)) = p.linear_in(*symbol) else {
                    return fail(i, "equation is not linear in the symbol");
                };
                let Ok(inv) = c.inv() else {
                    return fail(i, "zero coefficient");
                };
                if (-&rest).scale(&inv) != *value {
                    return fail(i, "linear solution is wrong");
                }
                st.assign(*symbol, value);
            }
            Step::SolveUnivariate {
                branch,
                equation,
                symbol,
                roots,
                complete,
                method,
            } => {
                let cap = self.degree_cap;
                let domain = self.domain.clone();
                let st = self.state(i, branch)?;
                let Some(p) = st.eqs.get(equation) else {
                    return fail(i, "no such equation");
                };
                let Some(poly) = p.rational_univariate(*symbol) else {
                    return fail(i, "equation is not univariate over Q in the symbol");
                };
                if poly.degree().unwrap_or(0) > cap {
                    return fail(i, "degree above cap");
                }
                let rs = universe(&domain).roots(&poly)?;
                if !rs.complete || !*complete {
                    return fail(i, "root set is not complete");
                }
                if rs.roots != *roots || rs.method != method {
                    return fail(i, "root set differs");
                }
                st.pending = Some(roots.iter().map(|r| vec![(*symbol, r.clone())]).collect());
            }
            Step::ApplyLemma {
                branch,
                equation,
                lemma,
                correspondence,
                cases,
            } => {
                let domain = self.domain.clone();
                let lemmas = self.lemmas;
                let st = self.state(i, branch)?;
                let Some(p) = st.eqs.get(equation) else {
                    return fail(i, "no such equation");
                };
                let strategy = universe(&domain);
                let integral = domain == RingDomain::Integers;
                let Some(m) = lemmas.match_equation(p, strategy.lemma_rings(), integral) else {
                    return fail(i, "no lemma matches");
                };
                if m.lemma != *lemma || m.correspondence != *correspondence || m.cases != *cases {
                    return fail(i, "lemma application differs");
                }
                st.pending = Some(m.cases);
                self.applied.insert(lemma.clone());
            }
            Step::CaseSplit { branch, cases } => {
                let path = branch.clone();
                let st = self.state(i, branch)?;
                let Some(expected) = st.pending.take() else {
                    return fail(i, "case split without a solve step");
                };
                let assigns: Vec<_> = cases.iter().map(|c| c.assign.clone()).collect();
                if assigns != expected {
                    return fail(i, "cases differ from the solutions");
                }
                let base = st.clone();
                let mut children = Vec::new();
                for (
                    k,
                    Case {
                        branch: child,
                        assign,
                    },
                ) in cases.iter().enumerate()
                {
                    if *child != format!("{path}.{k}") {
                        return fail(i, "child branch misnamed");
                    }
                    let mut cs = base.clone();
                    for (s, v) in assign {
                        cs.assign(*s, &MPoly::constant(v.clone()));
                    }
                    children.push((child.clone(), cs));
                }
                self.stack.extend(children.into_iter().rev());
                self.close();
            }
            Step::MembershipReject {
                branch,
                element,
                value,
            } => {
                let domain = self.domain.clone();
                let st = self.state(i, branch)?;
                let v = known(st, *element).and_then(MPoly::as_constant);
                if v.as_ref() != Some(value) || domain.contains(value) {
                    return fail(i, "value is not a rejected constant");
                }
                self.close();
            }
            Step::Contradiction { branch, equation } => {
                let st = self.state(i, branch)?;
                match st.eqs.get(equation) {
                    Some(p) if p.is_constant() && !p.is_zero() => {}
                    _ => return fail(i, "equation is not a nonzero constant"),
                }
                self.close();
            }
            Step::Conclude {
                branch,
                element,
                value,
            } => {
                let (target, r) = (self.target, self.cs.symbols[self.target].clone());
                let st = self.state(i, branch)?;
                let v = known(st, *element).and_then(MPoly::as_constant);
                if *element != target || v.as_ref() != Some(value) || *value != r {
                    return fail(i, "distinguished element is not fixed here");
                }
                self.close();
            }
        }
        Ok(())
    }
}

/// Re-checks a `fixed` trace against the set and universe named in its
/// header.
pub fn replay(trace: &Trace, lemmas: &LemmaBase) -> Result<()> {
    let h = &trace.header;
    let header_fail = |reason: &str| fail::<()>(0, format!("header: {reason}"));
    if h.verdict != "fixed" {
        return header_fail("only fixed traces replay");
    }
    let r = match h.elements.get(h.distinguished) {
        Some(r) => r.clone(),
        None => return header_fail("distinguished index out of range"),
    };
    let set = Neighborhood::new(h.elements.clone(), r)?;
    let domain: RingDomain = h.universe.parse()?;
    let cs = ConstraintSystem::extract(&set);
    let n = cs.symbols.len();
    let mut checker = Checker {
        target: set.distinguished_index(),
        cs,
        domain,
        lemmas,
        degree_cap: h.caps.degree,
        stack: vec![(
            "0".to_string(),
            State {
                values: vec![None; n],
                eqs: BTreeMap::new(),
                pending: None,
            },
        )],
        current: None,
        next_sym: 0,
        next_eq: 0,
        applied: BTreeSet::new(),
    };
    for (i, step) in trace.steps.iter().enumerate() {
        checker.step(i + 1, step)?;
    }
    let end = trace.steps.len() + 1;
    if checker.current.is_some() || !checker.stack.is_empty() {
        return fail(end, "some branch was left open");
    }
    let applied: Vec<String> = checker.applied.into_iter().collect();
    if applied != h.lemmas {
        return fail(end, "header lemma list differs from the lemmas applied");
    }
    let conditional = applied
        .iter()
        .any(|id| lemmas.get(id).is_none_or(|l| !l.fully_enumerable));
    if conditional != h.conditional {
        return fail(end, "header conditional flag is wrong");
    }
    Ok(())
}
