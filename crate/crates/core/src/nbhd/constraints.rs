use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::set::Neighborhood;
use crate::algebra::Elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Add,
    Mul,
}

impl Op {
    pub fn apply(self, a: &Elem, b: &Elem) -> crate::Result<Elem> {
        match self {
            Op::Add => a.checked_add(b),
            Op::Mul => a.checked_mul(b),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Mul => '*',
        }
    }
}

/// `a op b = c` between element indices, stored once with `a <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub op: Op,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e{} {} e{} = e{}",
            self.a,
            self.op.symbol(),
            self.b,
            self.c
        )
    }
}

/// Every constraint an arithmetic map on `A` must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    /// Index of `1` when `1` is in `A`.
    pub unit: Option<usize>,
    pub add: Vec<Triple>,
    pub mul: Vec<Triple>,
    /// The elements of `A`, indexed like the triples.
    pub symbols: Vec<Elem>,
}

impl ConstraintSystem {
    pub fn extract(set: &Neighborhood) -> Self {
        let els = set.elements();
        let index: HashMap<&Elem, usize> = els.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut add = Vec::new();
        let mut mul = Vec::new();
        for i in 0..els.len() {
            for j in i..els.len() {
                // members of A share one ambient field, so these cannot fail
                let s = &els[i] + &els[j];
                if let Some(&c) = index.get(&s) {
                    add.push(Triple {
                        op: Op::Add,
                        a: i,
                        b: j,
                        c,
                    });
                }
                let p = &els[i] * &els[j];
                if let Some(&c) = index.get(&p) {
                    mul.push(Triple {
                        op: Op::Mul,
                        a: i,
                        b: j,
                        c,
                    });
                }
            }
        }
        ConstraintSystem {
            unit: set.index_of(&Elem::one()),
            add,
            mul,
            symbols: els.to_vec(),
        }
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.add.iter().chain(self.mul.iter())
    }

    pub fn contains(&self, t: &Triple) -> bool {
        match t.op {
            Op::Add => self.add.binary_search(t).is_ok(),
            Op::Mul => self.mul.binary_search(t).is_ok(),
        }
    }

    pub fn len(&self) -> usize {
        self.add.len() + self.mul.len() + usize::from(self.unit.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
