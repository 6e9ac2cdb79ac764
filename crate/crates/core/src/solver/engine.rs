//! The search itself: propagate, introduce symbols, solve, split, recurse.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::mpoly::{MPoly, Sym};
use super::trace::{Case, Rule, Step};
use super::universe::Universe;
use super::Caps;
use crate::algebra::{Elem, FieldDescriptor, RingDomain};
use crate::error::Result;
use crate::lemma::LemmaBase;
use crate::nbhd::{is_arithmetic_on, moves, ArithmeticMap, ConstraintSystem, Op, Triple};

/// Values tried for symbols that no equation constrains.
const FREE_CANDIDATES: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];
const FREE_COMBINATION_LIMIT: usize = 4096;

pub(crate) enum Outcome {
    /// Every map in the branch fixes the distinguished element.
    Fixed,
    Moved(Vec<Elem>),
    Unknown {
        reason: String,
        residual: Vec<MPoly>,
        partial: Vec<Option<MPoly>>,
    },
}

#[derive(Clone)]
struct Branch {
    path: String,
    depth: usize,
    field: Option<Arc<FieldDescriptor>>,
    values: Vec<Option<MPoly>>,
    eqs: BTreeMap<u64, MPoly>,
    done: Vec<bool>,
}

impl Branch {
    fn unknown(&self, reason: impl Into<String>) -> Outcome {
        Outcome::Unknown {
            reason: reason.into(),
            residual: self.eqs.values().cloned().collect(),
            partial: self.values.clone(),
        }
    }

    fn substitute(&mut self, s: Sym, v: &MPoly) {
        for p in self.values.iter_mut().flatten() {
            *p = p.substitute(s, v);
        }
        let eqs = std::mem::take(&mut self.eqs);
        for (id, p) in eqs {
            let q = p.substitute(s, v);
            if !q.is_zero() {
                self.eqs.insert(id, q.monic());
            }
        }
    }
}

pub(crate) struct Engine<'a> {
    cs: &'a ConstraintSystem,
    triples: Vec<Triple>,
    target: usize,
    universe: &'a dyn Universe,
    lemmas: &'a LemmaBase,
    caps: &'a Caps,
    pub steps: Vec<Step>,
    pub used_lemmas: BTreeSet<String>,
    next_sym: Sym,
    next_eq: u64,
}

impl<'a> Engine<'a> {
    pub fn new(
        cs: &'a ConstraintSystem,
        target: usize,
        universe: &'a dyn Universe,
        lemmas: &'a LemmaBase,
        caps: &'a Caps,
    ) -> Self {
        Engine {
            cs,
            triples: cs.triples().copied().collect(),
            target,
            universe,
            lemmas,
            caps,
            steps: Vec::new(),
            used_lemmas: BTreeSet::new(),
            next_sym: 0,
            next_eq: 0,
        }
    }

    pub fn run(&mut self, field: Option<Arc<FieldDescriptor>>) -> Result<Outcome> {
        let n = self.cs.symbols.len();
        let mut root = Branch {
            path: "0".into(),
            depth: 0,
            field,
            values: vec![None; n],
            eqs: BTreeMap::new(),
            done: vec![false; self.triples.len()],
        };
        self.steps.push(Step::Branch {
            branch: root.path.clone(),
        });
        if let Some(u) = self.cs.unit {
            root.values[u] = Some(MPoly::int(1));
            self.steps.push(Step::Propagate {
                branch: root.path.clone(),
                rule: Rule::Unit,
                triple: None,
                element: u,
                value: MPoly::int(1),
            });
        }
        self.work(root)
    }

    fn work(&mut self, mut b: Branch) -> Result<Outcome> {
        if self.close(&b) {
            return Ok(Outcome::Fixed);
        }
        loop {
            if self.propagate(&mut b) {
                return Ok(Outcome::Fixed);
            }
            match self.pick_unknown(&b) {
                Some(e) => {
                    let s = self.next_sym;
                    self.next_sym += 1;
                    b.values[e] = Some(MPoly::var(s));
                    self.steps.push(Step::IntroduceSymbol {
                        branch: b.path.clone(),
                        symbol: s,
                        element: e,
                    });
                }
                None => break,
            }
        }
        if b.eqs.is_empty() {
            return Ok(self.complete_free(&b));
        }
        self.solve(b)
    }

    /// Emits the step closing `b` if it is settled; `true` when closed.
    fn close(&mut self, b: &Branch) -> bool {
        let branch = b.path.clone();
        if let Some((&id, _)) = b.eqs.iter().find(|(_, p)| p.is_constant() && !p.is_zero()) {
            self.steps.push(Step::Contradiction {
                branch,
                equation: id,
            });
            return true;
        }
        for (i, v) in b.values.iter().enumerate() {
            if let Some(c) = v.as_ref().and_then(MPoly::as_constant) {
                if !self.universe.contains(&c) {
                    self.steps.push(Step::MembershipReject {
                        branch,
                        element: i,
                        value: c,
                    });
                    return true;
                }
            }
        }
        let r = &self.cs.symbols[self.target];
        if let Some(c) = b.values[self.target].as_ref().and_then(MPoly::as_constant) {
            if &c == r {
                self.steps.push(Step::Conclude {
                    branch,
                    element: self.target,
                    value: c,
                });
                return true;
            }
        }
        false
    }

    /// The next value a triple forces, if any.
    fn fire(b: &Branch, t: &Triple) -> Option<(Rule, usize, MPoly)> {
        let v = |i: usize| b.values[i].as_ref();
        let (va, vb, vc) = (v(t.a), v(t.b), v(t.c));
        let nonzero_constant = |p: &MPoly| p.as_constant().filter(|c| !c.is_zero());
        match t.op {
            Op::Add => match (va, vb, vc) {
                (None, _, _) if t.a == t.b && t.b == t.c => Some((Rule::Zero, t.a, MPoly::zero())),
                (Some(x), Some(y), None) => Some((Rule::Sum, t.c, x + y)),
                (None, _, Some(z)) if t.a == t.b => {
                    Some((Rule::Half, t.a, z.scale(&Elem::frac(1, 2))))
                }
                (None, Some(y), Some(z)) => Some((Rule::DiffA, t.a, z - y)),
                (Some(x), None, Some(z)) => Some((Rule::DiffB, t.b, z - x)),
                _ => None,
            },
            Op::Mul => match (va, vb, vc) {
                (Some(x), Some(y), None) => Some((Rule::Product, t.c, x * y)),
                (None, Some(y), Some(z)) if t.a != t.b => nonzero_constant(y)
                    .map(|c| (Rule::QuotientA, t.a, z.scale(&c.inv().expect("nonzero")))),
                (Some(x), None, Some(z)) => nonzero_constant(x)
                    .map(|c| (Rule::QuotientB, t.b, z.scale(&c.inv().expect("nonzero")))),
                _ => None,
            },
        }
    }

    /// Runs the rules to a fixpoint, recording equations and eliminating
    /// linear symbols. `true` when the branch closed on the way.
    fn propagate(&mut self, b: &mut Branch) -> bool {
        loop {
            let mut changed = false;
            for ti in 0..self.triples.len() {
                if b.done[ti] {
                    continue;
                }
                let t = self.triples[ti];
                while let Some((rule, element, value)) = Engine::fire(b, &t) {
                    b.values[element] = Some(value.clone());
                    self.steps.push(Step::Propagate {
                        branch: b.path.clone(),
                        rule,
                        triple: Some(t),
                        element,
                        value,
                    });
                    changed = true;
                    if self.close(b) {
                        return true;
                    }
                }
                let (Some(x), Some(y), Some(z)) = (&b.values[t.a], &b.values[t.b], &b.values[t.c])
                else {
                    continue;
                };
                b.done[ti] = true;
                let lhs = match t.op {
                    Op::Add => x + y,
                    Op::Mul => x * y,
                };
                let residual = &lhs - z;
                if residual.is_zero() {
                    continue;
                }
                let poly = residual.monic();
                if b.eqs.values().any(|q| *q == poly) {
                    continue;
                }
                let id = self.next_eq;
                self.next_eq += 1;
                b.eqs.insert(id, poly.clone());
                self.steps.push(Step::Equation {
                    branch: b.path.clone(),
                    id,
                    triple: t,
                    poly,
                });
                changed = true;
                if self.close(b) || self.eliminate_linear(b) {
                    return true;
                }
            }
            if !changed {
                return false;
            }
        }
    }

    /// Solves every equation that is linear in some symbol, latest symbol
    /// first. `true` when the branch closed.
    fn eliminate_linear(&mut self, b: &mut Branch) -> bool {
        loop {
            let found = b.eqs.iter().find_map(|(&id, p)| {
                p.symbols()
                    .into_iter()
                    .rev()
                    .find_map(|s| p.linear_in(s).map(|(c, rest)| (id, s, c, rest)))
            });
            let Some((id, s, c, rest)) = found else {
                return false;
            };
            let value = (-&rest).scale(&c.inv().expect("linear coefficient is nonzero"));
            b.eqs.remove(&id);
            b.substitute(s, &value);
            self.steps.push(Step::SolveLinear {
                branch: b.path.clone(),
                equation: id,
                symbol: s,
                value,
            });
            if self.close(b) {
                return true;
            }
        }
    }

    /// Elements that become known once `start` is, by the sum and product
    /// rules alone.
    fn closure_size(&self, b: &Branch, start: usize) -> usize {
        let mut known: Vec<bool> = b.values.iter().map(Option::is_some).collect();
        known[start] = true;
        let mut count = 1;
        loop {
            let mut grew = false;
            for t in &self.triples {
                let (ka, kb, kc) = (known[t.a], known[t.b], known[t.c]);
                let next = match t.op {
                    Op::Add if ka && kb && !kc => Some(t.c),
                    Op::Add if t.a == t.b && kc && !ka => Some(t.a),
                    Op::Add if !ka && kb && kc => Some(t.a),
                    Op::Add if ka && !kb && kc => Some(t.b),
                    Op::Mul if ka && kb && !kc => Some(t.c),
                    _ => None,
                };
                if let Some(i) = next {
                    known[i] = true;
                    count += 1;
                    grew = true;
                }
            }
            if !grew {
                return count;
            }
        }
    }

    /// The unknown element to name next: prefer square roots of known
    /// values, then the largest knowledge gain, then frequent factors.
    fn pick_unknown(&self, b: &Branch) -> Option<usize> {
        let unit = self.cs.unit;
        let score = |e: usize| {
            let square = self
                .cs
                .mul
                .iter()
                .any(|t| t.a == e && t.b == e && t.c != e && b.values[t.c].is_some());
            let factor = self
                .cs
                .mul
                .iter()
                .filter(|t| (t.a == e || t.b == e) && Some(t.a) != unit && Some(t.b) != unit)
                .count();
            (square, self.closure_size(b, e), factor, Reverse(e))
        };
        (0..b.values.len())
            .filter(|&e| b.values[e].is_none())
            .max_by_key(|&e| score(e))
    }

    fn witness_ok(&self, values: &[Elem]) -> bool {
        let map = ArithmeticMap::from_pairs(
            self.universe.domain().clone(),
            self.cs.symbols.iter().cloned().zip(values.iter().cloned()),
        );
        matches!(is_arithmetic_on(&map, self.cs), Ok(None))
            && moves(&map, &self.cs.symbols[self.target]).unwrap_or(false)
    }

    /// No equations remain, so any values for the leftover symbols satisfy
    /// every triple; look for a choice that moves the target.
    fn complete_free(&self, b: &Branch) -> Outcome {
        let syms: Vec<Sym> = b
            .values
            .iter()
            .flatten()
            .flat_map(|p| p.symbols())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut choice = vec![0usize; syms.len()];
        for _ in 0..FREE_COMBINATION_LIMIT {
            let assign: BTreeMap<Sym, MPoly> = syms
                .iter()
                .zip(&choice)
                .map(|(&s, &i)| (s, MPoly::int(FREE_CANDIDATES[i])))
                .collect();
            let values: Option<Vec<Elem>> = b
                .values
                .iter()
                .map(|v| {
                    v.as_ref()
                        .and_then(|p| p.substitute_all(&assign).as_constant())
                })
                .collect();
            if let Some(values) = values {
                if values.iter().all(|v| self.universe.contains(v)) && self.witness_ok(&values) {
                    return Outcome::Moved(values);
                }
            }
            if !odometer(&mut choice, FREE_CANDIDATES.len()) {
                break;
            }
        }
        b.unknown("no moving completion of the unconstrained symbols was found")
    }

    fn solve(&mut self, b: Branch) -> Result<Outcome> {
        let mut order: Vec<(usize, u32, u64)> = b
            .eqs
            .iter()
            .map(|(&id, p)| (p.symbols().len(), p.total_degree(), id))
            .collect();
        order.sort();
        let integral = *self.universe.domain() == RingDomain::Integers;
        let mut notes = Vec::new();
        for (nsyms, _, id) in order {
            let p = &b.eqs[&id];
            if !p.is_rational() {
                notes.push(format!("equation {id} has irrational coefficients"));
                continue;
            }
            if nsyms == 1 {
                let s = *p.symbols().iter().next().expect("one symbol");
                let deg = p.degree_in(s) as usize;
                if deg > self.caps.degree {
                    notes.push(format!("equation {id} has degree {deg} above the cap"));
                    continue;
                }
                let poly = p.rational_univariate(s).expect("univariate and rational");
                let rs = self.universe.roots(&poly)?;
                self.steps.push(Step::SolveUnivariate {
                    branch: b.path.clone(),
                    equation: id,
                    symbol: s,
                    roots: rs.roots.clone(),
                    complete: rs.complete,
                    method: rs.method.to_string(),
                });
                let cases = rs.roots.into_iter().map(|r| vec![(s, r)]).collect();
                return self.split(b, cases, rs.complete);
            }
            match self
                .lemmas
                .match_equation(p, self.universe.lemma_rings(), integral)
            {
                Some(m) => {
                    self.used_lemmas.insert(m.lemma.clone());
                    self.steps.push(Step::ApplyLemma {
                        branch: b.path.clone(),
                        equation: id,
                        lemma: m.lemma,
                        correspondence: m.correspondence,
                        cases: m.cases.clone(),
                    });
                    return self.split(b, m.cases, true);
                }
                None => notes.push(format!("no lemma matches equation {id}")),
            }
        }
        Ok(b.unknown(notes.join("; ")))
    }

    fn split(
        &mut self,
        b: Branch,
        cases: Vec<Vec<(Sym, Elem)>>,
        complete: bool,
    ) -> Result<Outcome> {
        if cases.len() > self.caps.splits {
            return Ok(b.unknown(format!("{} cases exceed the split cap", cases.len())));
        }
        if !cases.is_empty() && b.depth + 1 > self.caps.depth {
            return Ok(b.unknown("case depth cap reached"));
        }
        let children: Vec<Case> = cases
            .into_iter()
            .enumerate()
            .map(|(i, assign)| Case {
                branch: format!("{}.{i}", b.path),
                assign,
            })
            .collect();
        self.steps.push(Step::CaseSplit {
            branch: b.path.clone(),
            cases: children.clone(),
        });
        let mut unknown = None;
        for case in children {
            let mut child = b.clone();
            child.path = case.branch.clone();
            child.depth += 1;
            let mut compatible = true;
            for (s, v) in &case.assign {
                if let Some(k) = v.field() {
                    match &child.field {
                        None => child.field = Some(k.clone()),
                        Some(f) if f == k => {}
                        Some(_) => compatible = false,
                    }
                }
                if compatible {
                    child.substitute(*s, &MPoly::constant(v.clone()));
                }
            }
            if !compatible {
                unknown.get_or_insert(
                    child.unknown("root lies in a field incompatible with the branch"),
                );
                continue;
            }
            self.steps.push(Step::Branch {
                branch: child.path.clone(),
            });
            match self.work(child)? {
                Outcome::Fixed => {}
                moved @ Outcome::Moved(_) => return Ok(moved),
                u @ Outcome::Unknown { .. } => {
                    unknown.get_or_insert(u);
                }
            }
        }
        if !complete && unknown.is_none() {
            unknown = Some(b.unknown("root set in the universe is not known to be complete"));
        }
        Ok(unknown.unwrap_or(Outcome::Fixed))
    }
}

/// Advances a mixed-radix counter; `false` after the last combination.
fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}
