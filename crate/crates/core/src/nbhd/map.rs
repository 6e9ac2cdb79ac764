use std::collections::BTreeMap;
use std::fmt;

use super::constraints::{ConstraintSystem, Triple};
use super::set::Neighborhood;
use crate::algebra::{Elem, RingDomain};
use crate::error::{Error, Result};

/// A finite map `A -> K` with its declared codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticMap {
    assignments: BTreeMap<Elem, Elem>,
    codomain: RingDomain,
}

impl ArithmeticMap {
    pub fn new(codomain: RingDomain) -> Self {
        ArithmeticMap {
            assignments: BTreeMap::new(),
            codomain,
        }
    }

    pub fn from_pairs(codomain: RingDomain, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> Self {
        ArithmeticMap {
            assignments: pairs.into_iter().collect(),
            codomain,
        }
    }

    /// The identity on `elements`, to be overridden pointwise.
    pub fn identity_on(codomain: RingDomain, elements: &[Elem]) -> Self {
        ArithmeticMap::from_pairs(codomain, elements.iter().map(|e| (e.clone(), e.clone())))
    }

    pub fn insert(&mut self, x: Elem, y: Elem) {
        self.assignments.insert(x, y);
    }

    pub fn get(&self, x: &Elem) -> Option<&Elem> {
        self.assignments.get(x)
    }

    pub fn codomain(&self) -> &RingDomain {
        &self.codomain
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Elem, &Elem)> {
        self.assignments.iter()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Elements of the domain that the map does not fix.
    pub fn moved(&self) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        for (x, _) in self.iter() {
            if moves(self, x)? {
                out.push(x.clone());
            }
        }
        Ok(out)
    }
}

/// The first constraint a map fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Unit {
        value: Elem,
    },
    Triple {
        triple: Triple,
        elements: [Elem; 3],
        lhs: Elem,
        rhs: Elem,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unit { value } => write!(f, "f(1) = {value}, expected 1"),
            Violation::Triple {
                triple,
                elements: [a, b, c],
                lhs,
                rhs,
            } => write!(
                f,
                "f({a}) {op} f({b}) = {lhs} but f({c}) = {rhs}",
                op = triple.op.symbol()
            ),
        }
    }
}

/// Checks conditions (unit, additive, multiplicative) exactly. `Ok(None)`
/// means the map is arithmetic.
pub fn is_arithmetic(f: &ArithmeticMap, set: &Neighborhood) -> Result<Option<Violation>> {
    let cs = ConstraintSystem::extract(set);
    is_arithmetic_on(f, &cs)
}

pub fn is_arithmetic_on(f: &ArithmeticMap, cs: &ConstraintSystem) -> Result<Option<Violation>> {
    let mut values = Vec::with_capacity(cs.symbols.len());
    for x in &cs.symbols {
        let v = f
            .get(x)
            .ok_or_else(|| Error::InvalidMap(format!("map is not defined at {x}")))?;
        if !f.codomain().contains(v) {
            return Err(Error::NotInCodomain {
                element: x.to_string(),
                value: v.to_string(),
                codomain: f.codomain().tag(),
            });
        }
        values.push(v);
    }
    if f.len() != cs.symbols.len() {
        return Err(Error::InvalidMap("map is defined outside the set".into()));
    }
    if let Some(u) = cs.unit {
        if !values[u].is_one() {
            return Ok(Some(Violation::Unit {
                value: values[u].clone(),
            }));
        }
    }
    for t in cs.triples() {
        let lhs = t.op.apply(values[t.a], values[t.b])?;
        if lhs != *values[t.c] {
            return Ok(Some(Violation::Triple {
                triple: *t,
                elements: [
                    cs.symbols[t.a].clone(),
                    cs.symbols[t.b].clone(),
                    cs.symbols[t.c].clone(),
                ],
                lhs,
                rhs: values[t.c].clone(),
            }));
        }
    }
    Ok(None)
}

/// `f(r) != r`, comparing in a common field.
pub fn moves(f: &ArithmeticMap, r: &Elem) -> Result<bool> {
    let v = f
        .get(r)
        .ok_or_else(|| Error::InvalidMap(format!("map is not defined at {r}")))?;
    Elem::common_field(v, r)?;
    Ok(v != r)
}
