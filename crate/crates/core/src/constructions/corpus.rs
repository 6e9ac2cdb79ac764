//! Every claim about the families, one query per element and universe.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::families::{d_chain, HFamily};
use super::witness::cubic_field;
use super::{FamilyRegistry, FamilySpec};
use crate::algebra::{Elem, FieldDescriptor, RingDomain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Fixed,
    Moved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusClaim {
    pub id: String,
    #[serde(flatten)]
    pub spec: FamilySpec,
    pub element: Elem,
    #[serde(serialize_with = "ser_domain", deserialize_with = "de_domain")]
    pub universe: RingDomain,
    pub expected: Expected,
    /// Map that moves `element`, for `Moved` claims.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn ser_domain<S: Serializer>(d: &RingDomain, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&d.tag())
}

fn de_domain<'de, D: Deserializer<'de>>(d: D) -> Result<RingDomain, D::Error> {
    let tag = String::deserialize(d)?;
    tag.parse().map_err(serde::de::Error::custom)
}

struct Builder {
    families: FamilyRegistry,
    claims: Vec<CorpusClaim>,
}

impl Builder {
    fn push(
        &mut self,
        spec: &FamilySpec,
        element: Elem,
        universe: &RingDomain,
        witness: Option<&str>,
    ) {
        let expected = if witness.is_some() {
            Expected::Moved
        } else {
            Expected::Fixed
        };
        self.claims.push(CorpusClaim {
            id: format!("{spec}/{element}/{}", universe.tag()),
            spec: spec.clone(),
            element,
            universe: universe.clone(),
            expected,
            witness: witness.map(str::to_string),
        });
    }

    /// One claim per element the family's claims are about.
    fn all(
        &mut self,
        family: &str,
        ns: impl IntoIterator<Item = u64>,
        universe: &RingDomain,
        witness: Option<&str>,
    ) {
        for n in ns {
            let spec = FamilySpec::new(family, Some(n));
            for r in self
                .families
                .claimed(&spec)
                .expect("corpus parameters are in range")
            {
                self.push(&spec, r, universe, witness);
            }
        }
    }
}

/// The manifest in a fixed order.
pub fn corpus() -> Vec<CorpusClaim> {
    use RingDomain::*;
    let sqrt = |d| NumberField(FieldDescriptor::quadratic(d).expect("non-square radicand"));
    let cubic = NumberField(cubic_field().expect("irreducible cubic"));
    let mut b = Builder {
        families: FamilyRegistry::default(),
        claims: Vec::new(),
    };

    for u in [Reals, Rationals, Integers] {
        b.all("S", 3..=6, &u, None);
    }
    b.all("S", 3..=6, &GaussianIntegers, Some("gamma"));

    for u in [Reals, Integers] {
        b.all("T", 1..=4, &u, None);
    }
    b.all("T", 1..=4, &GaussianIntegers, Some("tau"));

    b.all("B", 3..=5, &Integers, None);
    b.all("B", 3..=5, &Rationals, Some("phi"));
    for n in 3..=5 {
        b.push(
            &FamilySpec::new("B", Some(n)),
            Elem::int(5),
            &Integers,
            Some("b5"),
        );
    }

    b.all("Bm4", 3..=5, &Rationals, None);
    b.all("Bm4", 3..=5, &cubic, Some("psi"));

    b.all("C", 1..=3, &Integers, None);
    b.all("C", 1..=3, &Rationals, Some("g"));

    b.all("H", 3..=4, &Integers, None);
    for n in 3..=4 {
        let spec = FamilySpec::new("H", Some(n));
        for r in HFamily::rationally_movable(n) {
            b.push(&spec, r, &Rationals, Some("hq"));
        }
        b.push(&spec, Elem::int(13), &Integers, Some("h13"));
    }

    let d = FamilySpec::new("D", None);
    for r in b.families.claimed(&d).unwrap() {
        b.push(&d, r.clone(), &Rationals, None);
        b.push(&d, r, &sqrt(5), Some("h"));
    }
    for n in 1..=3 {
        let spec = FamilySpec::new("Diter", Some(n));
        let top = d_chain(n).pop().unwrap();
        b.push(&spec, top.clone(), &Rationals, None);
        b.push(&spec, top, &sqrt(5), Some("h"));
    }

    b.all("E", 3..=5, &Rationals, None);
    b.all("E", 3..=5, &sqrt(33), Some("sigma"));

    let g = FamilySpec::new("G", None);
    b.push(&g, Elem::int(-1), &Integers, None);
    b.push(&g, Elem::int(-1), &Rationals, Some("eta"));
    let y = FamilySpec::new("Y", None);
    b.push(&y, Elem::int(-1), &Rationals, None);
    b.push(&y, Elem::int(-1), &sqrt(3), Some("kappa"));
    let m = FamilySpec::new("M", None);
    b.push(&m, Elem::int(-1), &Reals, None);
    b.push(&m, Elem::int(-1), &GaussianIntegers, Some("chi"));

    let js = [3, 5, 6, 7, 9, 10, 11, 12, 13];
    b.all("J", js, &Reals, None);
    b.all("J", js, &Rationals, None);
    b.all("J", js, &Complexes, Some("theta"));

    b.claims
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn ids_are_unique_and_round_trip() {
        let c = corpus();
        let ids: BTreeSet<_> = c.iter().map(|c| c.id.clone()).collect();
        assert_eq!(ids.len(), c.len());
        let text = serde_json::to_string(&c).unwrap();
        let back: Vec<CorpusClaim> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn moved_claims_name_a_witness() {
        for c in corpus() {
            assert_eq!(
                c.witness.is_some(),
                c.expected == Expected::Moved,
                "{}",
                c.id
            );
        }
    }
}
