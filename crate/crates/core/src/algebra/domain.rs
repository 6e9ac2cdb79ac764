use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::field::{Elem, FieldDescriptor};
use super::poly::Poly;
use super::rational::{is_integer, parse_rational};
use crate::error::{Error, Result};

/// The ring `K` a map lands in, or the ring a universal claim quantifies over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDomain {
    Integers,
    Rationals,
    GaussianIntegers,
    NumberField(Arc<FieldDescriptor>),
    Reals,
    Complexes,
}

impl RingDomain {
    pub fn contains(&self, e: &Elem) -> bool {
        match self {
            RingDomain::Integers => e.as_rational().is_some_and(is_integer),
            RingDomain::Rationals => e.is_rational(),
            RingDomain::GaussianIntegers => {
                e.is_integral()
                    && e.field()
                        .is_none_or(|f| **f == *FieldDescriptor::gaussian())
            }
            RingDomain::NumberField(k) => e.field().is_none_or(|f| f == k),
            RingDomain::Reals => e.field().is_none_or(|f| f.is_real()),
            RingDomain::Complexes => true,
        }
    }

    /// The number field whose elements this domain is built from, if any.
    pub fn field(&self) -> Option<Arc<FieldDescriptor>> {
        match self {
            RingDomain::GaussianIntegers => Some(FieldDescriptor::gaussian()),
            RingDomain::NumberField(k) => Some(k.clone()),
            _ => None,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            RingDomain::Integers => "Z".into(),
            RingDomain::Rationals => "Q".into(),
            RingDomain::GaussianIntegers => "Zi".into(),
            RingDomain::Reals => "R".into(),
            RingDomain::Complexes => "C".into(),
            RingDomain::NumberField(k) => match k.radicand() {
                Some(d) => format!("Qsqrt{d}"),
                None => format!(
                    "Qpoly:{}",
                    k.min_poly()
                        .coeffs()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            },
        }
    }
}

impl fmt::Display for RingDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for RingDomain {
    type Err = Error;

    /// Tags: `Z`, `Q`, `R`, `C`, `Zi`, `Qsqrt<D>`, `Qpoly:<c0,c1,...>` (lowest
    /// degree first).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "Z" => return Ok(RingDomain::Integers),
            "Q" => return Ok(RingDomain::Rationals),
            "R" => return Ok(RingDomain::Reals),
            "C" => return Ok(RingDomain::Complexes),
            "Zi" => return Ok(RingDomain::GaussianIntegers),
            _ => {}
        }
        if let Some(d) = s.strip_prefix("Qsqrt") {
            let d: i64 = d
                .parse()
                .map_err(|_| Error::UnknownUniverse(s.to_string()))?;
            return Ok(RingDomain::NumberField(FieldDescriptor::quadratic(d)?));
        }
        if let Some(cs) = s.strip_prefix("Qpoly:") {
            let coeffs = cs
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            let p = Poly::new(coeffs);
            if p.degree() == Some(1) {
                return Ok(RingDomain::Rationals);
            }
            return Ok(RingDomain::NumberField(FieldDescriptor::new(&p)?));
        }
        Err(Error::UnknownUniverse(s.to_string()))
    }
}
