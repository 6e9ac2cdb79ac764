//! The set families, each expanded to an exact element list.

use num_bigint::BigInt;

use crate::algebra::Elem;
use crate::error::{Error, Result};

use super::jset::gen_j;

/// Which parameters a family accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    /// A single fixed set.
    None,
    /// `n >= min`, optionally bounded above.
    Range { min: u64, max: Option<u64> },
}

pub trait Family: Send + Sync {
    fn name(&self) -> &'static str;

    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    fn param(&self) -> Param;

    /// Elements in the order of the defining display.
    fn elements(&self, n: u64) -> Vec<Elem>;

    /// Elements the defining claims are made about.
    fn claimed(&self, n: u64) -> Vec<Elem>;

    /// Rejects out-of-range or missing parameters; returns the parameter in use.
    fn check(&self, n: Option<u64>) -> Result<u64> {
        match (self.param(), n) {
            (Param::None, None) => Ok(0),
            (Param::None, Some(_)) => Err(Error::ParameterOutOfRange(format!(
                "{} takes no parameter",
                self.name()
            ))),
            (Param::Range { .. }, None) => Err(Error::ParameterOutOfRange(format!(
                "{} needs a parameter n",
                self.name()
            ))),
            (Param::Range { min, max }, Some(n)) => {
                if n < min || max.is_some_and(|m| n > m) {
                    let hi = max.map_or("".to_string(), |m| format!(" and n <= {m}"));
                    Err(Error::ParameterOutOfRange(format!(
                        "{} needs n >= {min}{hi}, got {n}",
                        self.name()
                    )))
                } else {
                    Ok(n)
                }
            }
        }
    }
}

fn ints(xs: &[i64]) -> Vec<Elem> {
    xs.iter().map(|&x| Elem::int(x)).collect()
}

fn powers(base: i64, n: u64) -> Vec<Elem> {
    (1..=n as u32).map(|k| Elem::int(base).pow(k)).collect()
}

fn without(all: Vec<Elem>, drop: &[Elem]) -> Vec<Elem> {
    all.into_iter().filter(|e| !drop.contains(e)).collect()
}

pub struct SFamily;

impl Family for SFamily {
    fn name(&self) -> &'static str {
        "S"
    }
    fn param(&self) -> Param {
        Param::Range { min: 3, max: None }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = ints(&[1, 10, 20, 30]);
        v.extend(powers(3, n));
        v
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        without(self.elements(n), &[Elem::one()])
    }
}

pub struct TFamily;

impl Family for TFamily {
    fn name(&self) -> &'static str {
        "T"
    }
    fn param(&self) -> Param {
        Param::Range { min: 1, max: None }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = ints(&[-2, 1, 5, 10, 20]);
        v.extend(powers(4, n));
        v
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        without(self.elements(n), &ints(&[-2, 1]))
    }
}

pub struct BFamily;

impl Family for BFamily {
    fn name(&self) -> &'static str {
        "B"
    }
    fn param(&self) -> Param {
        Param::Range { min: 3, max: None }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = ints(&[1, 5, 25, 26]);
        v.extend(powers(3, n));
        v
    }
    /// 5 is left out: it moves even inside Z.
    fn claimed(&self, n: u64) -> Vec<Elem> {
        without(self.elements(n), &ints(&[1, 5]))
    }
}

/// `{-4}` together with `B_n`, the set behind the cubic-field witness.
pub struct BWithMinusFour;

impl Family for BWithMinusFour {
    fn name(&self) -> &'static str {
        "Bm4"
    }
    fn param(&self) -> Param {
        Param::Range { min: 3, max: None }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = vec![Elem::int(-4)];
        v.extend(BFamily.elements(n));
        v
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        without(self.elements(n), &[Elem::one()])
    }
}

pub struct CFamily;

impl Family for CFamily {
    fn name(&self) -> &'static str {
        "C"
    }
    fn param(&self) -> Param {
        Param::Range { min: 1, max: None }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = ints(&[1, 3, 5, 13, 25, 65, 169, 194, 195]);
        v.extend(powers(9, n));
        v
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        powers(9, n)
    }
}

const D_BASE: [(i64, i64); 18] = [
    (-36, 1),
    (1, 2),
    (1, 1),
    (2, 1),
    (5, 2),
    (5, 1),
    (12, 1),
    (25, 1),
    (50, 1),
    (100, 1),
    (144, 1),
    (200, 1),
    (400, 1),
    (425, 1),
    (430, 1),
    (432, 1),
    (1296, 1),
    (1728, 1),
];

fn d_base() -> Vec<Elem> {
    D_BASE.iter().map(|&(p, q)| Elem::frac(p, q)).collect()
}

pub struct DStatic;

impl Family for DStatic {
    fn name(&self) -> &'static str {
        "Dstatic"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["D"]
    }
    fn param(&self) -> Param {
        Param::None
    }
    fn elements(&self, _: u64) -> Vec<Elem> {
        d_base()
    }
    fn claimed(&self, _: u64) -> Vec<Elem> {
        ints(&[12, 144, 1296, 1728])
    }
}

/// `D_0 = D`, `D_{k+1} = D_k ∪ {d_k^2}` with `d_k` the largest element.
pub struct DIter {
    pub max_depth: u64,
}

impl Default for DIter {
    fn default() -> Self {
        DIter { max_depth: 6 }
    }
}

/// The element added at each step, `d_0 = 1728` first.
pub fn d_chain(n: u64) -> Vec<Elem> {
    let mut chain = vec![Elem::int(1728)];
    for _ in 0..n {
        let last = chain.last().unwrap();
        chain.push(last * last);
    }
    chain
}

impl Family for DIter {
    fn name(&self) -> &'static str {
        "Diter"
    }
    fn param(&self) -> Param {
        Param::Range {
            min: 0,
            max: Some(self.max_depth),
        }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = d_base();
        v.extend(d_chain(n).into_iter().skip(1));
        v
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        vec![d_chain(n).pop().unwrap()]
    }
}

pub struct EFamily;

impl EFamily {
    pub fn fixed_part() -> Vec<Elem> {
        vec![
            Elem::frac(1, 2),
            Elem::one(),
            Elem::frac(3, 2),
            Elem::frac(9, 4),
        ]
    }
}

impl Family for EFamily {
    fn name(&self) -> &'static str {
        "E"
    }
    fn param(&self) -> Param {
        Param::Range { min: 3, max: None }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = Self::fixed_part();
        v.push(Elem::int(9));
        v.extend(powers(-2, n));
        v
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        without(self.elements(n), &Self::fixed_part())
    }
}

pub struct HFamily;

impl HFamily {
    pub const CORE: [i64; 13] = [
        1, 2, 4, 16, 60, 64, 3600, 3604, 3620, 3622, 3623, 57967, 57968,
    ];

    /// Elements that already move inside Q.
    pub fn rationally_movable(n: u64) -> Vec<Elem> {
        let mut v = ints(&[13, 169]);
        v.extend(powers(7, n));
        v
    }
}

impl Family for HFamily {
    fn name(&self) -> &'static str {
        "H"
    }
    fn param(&self) -> Param {
        Param::Range { min: 3, max: None }
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        let mut v = ints(&Self::CORE);
        v.extend(Self::rationally_movable(n));
        v
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        without(self.elements(n), &[Elem::int(13)])
    }
}

/// A fixed list whose claims concern `-1` alone.
pub struct SignSet {
    pub name: &'static str,
    pub elements: &'static [i64],
}

impl Family for SignSet {
    fn name(&self) -> &'static str {
        self.name
    }
    fn param(&self) -> Param {
        Param::None
    }
    fn elements(&self, _: u64) -> Vec<Elem> {
        ints(self.elements)
    }
    fn claimed(&self, _: u64) -> Vec<Elem> {
        vec![Elem::int(-1)]
    }
}

pub const G_SET: SignSet = SignSet {
    name: "G",
    elements: &[-4, -1, 1, 3, 9, 12, 16],
};

pub const Y_SET: SignSet = SignSet {
    name: "Y",
    elements: &[-4, -1, 1, 3, 9, 12, 14, 16, 20, 180, 196],
};

pub const M_SET: SignSet = SignSet {
    name: "M",
    elements: &[-4, -1, 1, 3, 5, 9, 11, 42, 45, 121, 126],
};

pub struct JFamily;

/// True for n in {4, 8, 16, ...}; 1 and 2 are below the range anyway.
pub fn is_power_of_two(n: u64) -> bool {
    n.is_power_of_two()
}

impl Family for JFamily {
    fn name(&self) -> &'static str {
        "J"
    }
    fn param(&self) -> Param {
        Param::Range { min: 3, max: None }
    }
    fn check(&self, n: Option<u64>) -> Result<u64> {
        let n = n.ok_or_else(|| Error::ParameterOutOfRange("J needs a parameter n".into()))?;
        if n < 3 || is_power_of_two(n) {
            return Err(Error::ParameterOutOfRange(format!(
                "J needs n >= 3 and not a power of 2, got {n}"
            )));
        }
        Ok(n)
    }
    fn elements(&self, n: u64) -> Vec<Elem> {
        gen_j(n).expect("parameter checked").elements
    }
    fn claimed(&self, n: u64) -> Vec<Elem> {
        vec![Elem::rational(BigInt::from(n).into())]
    }
}
