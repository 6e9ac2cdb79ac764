//! Generators for the set families and their witness maps, and the corpus
//! of claims made about them.

pub mod corpus;
pub mod families;
pub mod jset;
pub mod witness;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::nbhd::{ArithmeticMap, Neighborhood};

pub use corpus::{corpus, CorpusClaim, Expected};
pub use families::Family;
pub use jset::{gen_j, theta, JSet};
pub use witness::{MoveClaim, Witness};

/// A family name with its parameter, `None` for the fixed sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

impl FamilySpec {
    pub fn new(family: &str, n: Option<u64>) -> Self {
        FamilySpec {
            family: family.to_string(),
            n,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "{}({n})", self.family),
            None => f.write_str(&self.family),
        }
    }
}

pub struct FamilyRegistry {
    families: Vec<Box<dyn Family>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        use families::*;
        let mut r = FamilyRegistry::empty();
        r.register(Box::new(SFamily));
        r.register(Box::new(TFamily));
        r.register(Box::new(BFamily));
        r.register(Box::new(BWithMinusFour));
        r.register(Box::new(CFamily));
        r.register(Box::new(DStatic));
        r.register(Box::new(DIter::default()));
        r.register(Box::new(EFamily));
        r.register(Box::new(HFamily));
        r.register(Box::new(G_SET));
        r.register(Box::new(Y_SET));
        r.register(Box::new(M_SET));
        r.register(Box::new(JFamily));
        r
    }
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry {
            families: Vec::new(),
        }
    }

    /// Adds a family; a later registration shadows an earlier one of the same name.
    pub fn register(&mut self, family: Box<dyn Family>) {
        self.families.insert(0, family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Family> {
        self.families
            .iter()
            .find(|f| f.name() == name || f.aliases().contains(&name))
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v: Vec<_> = self.families.iter().map(|f| f.name()).collect();
        v.dedup();
        v
    }

    /// The family and the validated parameter.
    pub fn resolve(&self, spec: &FamilySpec) -> Result<(&dyn Family, u64)> {
        let f = self.get(&spec.family)?;
        let n = f.check(spec.n)?;
        Ok((f, n))
    }

    pub fn elements(&self, spec: &FamilySpec) -> Result<Vec<Elem>> {
        let (f, n) = self.resolve(spec)?;
        Ok(f.elements(n))
    }

    pub fn claimed(&self, spec: &FamilySpec) -> Result<Vec<Elem>> {
        let (f, n) = self.resolve(spec)?;
        Ok(f.claimed(n))
    }

    pub fn neighborhood(&self, spec: &FamilySpec, r: &Elem) -> Result<Neighborhood> {
        Neighborhood::new(self.elements(spec)?, r.clone())
    }

    /// One set per claimed element.
    pub fn gen_family(&self, spec: &FamilySpec) -> Result<Vec<Neighborhood>> {
        let elements = self.elements(spec)?;
        self.claimed(spec)?
            .into_iter()
            .map(|r| Neighborhood::new(elements.clone(), r))
            .collect()
    }
}

pub struct WitnessRegistry {
    witnesses: Vec<Box<dyn Witness>>,
}

impl Default for WitnessRegistry {
    fn default() -> Self {
        use witness::*;
        let mut r = WitnessRegistry::empty();
        for w in [
            Box::new(Gamma) as Box<dyn Witness>,
            Box::new(Tau),
            Box::new(Phi),
            Box::new(Eta),
            Box::new(Kappa),
            Box::new(Chi),
            Box::new(Psi),
            Box::new(GMap),
            Box::new(HMap),
            Box::new(Sigma),
            Box::new(Theta),
            Box::new(NegateFive),
            Box::new(HRational),
            Box::new(NegateThirteen),
        ] {
            r.register(w);
        }
        r
    }
}

impl WitnessRegistry {
    pub fn empty() -> Self {
        WitnessRegistry {
            witnesses: Vec::new(),
        }
    }

    pub fn register(&mut self, w: Box<dyn Witness>) {
        self.witnesses.push(w);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Witness> {
        self.witnesses
            .iter()
            .find(|w| w.name() == name || w.aliases().contains(&name))
            .map(|w| w.as_ref())
            .ok_or_else(|| Error::UnknownWitness(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.witnesses.iter().map(|w| w.name()).collect()
    }

    /// Witness `name` on the family member `spec`.
    pub fn witness_map(
        &self,
        families: &FamilyRegistry,
        name: &str,
        spec: &FamilySpec,
    ) -> Result<ArithmeticMap> {
        let (w, f, n) = self.lookup(families, name, spec)?;
        let map = w.build(n)?;
        let elements = f.elements(n);
        if map.len() != elements.len() || elements.iter().any(|e| map.get(e).is_none()) {
            return Err(Error::InvalidMap(format!(
                "{name} does not cover {spec} exactly"
            )));
        }
        Ok(map)
    }

    pub fn claim(
        &self,
        families: &FamilyRegistry,
        name: &str,
        spec: &FamilySpec,
    ) -> Result<MoveClaim> {
        let (w, _, n) = self.lookup(families, name, spec)?;
        Ok(w.claim(n))
    }

    fn lookup<'a>(
        &'a self,
        families: &'a FamilyRegistry,
        name: &str,
        spec: &FamilySpec,
    ) -> Result<(&'a dyn Witness, &'a dyn Family, u64)> {
        let w = self.get(name)?;
        let (f, n) = families.resolve(spec)?;
        if !w.families().contains(&f.name()) {
            return Err(Error::InvalidMap(format!(
                "witness {} is not defined on family {}",
                w.name(),
                f.name()
            )));
        }
        Ok((w, f, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nbhd::is_arithmetic;

    fn ints(xs: &[i64]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem::int(x)).collect()
    }

    #[test]
    fn printed_examples() {
        let r = FamilyRegistry::default();
        assert_eq!(
            r.elements(&FamilySpec::new("S", Some(3))).unwrap(),
            ints(&[1, 10, 20, 30, 3, 9, 27])
        );
        assert_eq!(
            r.elements(&FamilySpec::new("C", Some(1))).unwrap(),
            ints(&[1, 3, 5, 13, 25, 65, 169, 194, 195, 9])
        );
        let d = r.elements(&FamilySpec::new("D", None)).unwrap();
        let d1 = r.elements(&FamilySpec::new("Diter", Some(1))).unwrap();
        assert_eq!(d1.len(), d.len() + 1);
        assert_eq!(d1.last(), Some(&Elem::int(2985984)));
        let h = r.elements(&FamilySpec::new("H", Some(3))).unwrap();
        assert!(h.contains(&Elem::int(57967)) && h.contains(&Elem::int(57968)));
    }

    #[test]
    fn parameter_ranges() {
        let r = FamilyRegistry::default();
        for (f, n) in [
            ("S", 2),
            ("B", 2),
            ("E", 2),
            ("H", 2),
            ("C", 0),
            ("T", 0),
            ("J", 8),
            ("Diter", 7),
        ] {
            assert!(
                matches!(
                    r.elements(&FamilySpec::new(f, Some(n))),
                    Err(Error::ParameterOutOfRange(_))
                ),
                "{f} {n}"
            );
        }
        assert!(r.elements(&FamilySpec::new("G", Some(1))).is_err());
        assert!(r.elements(&FamilySpec::new("S", None)).is_err());
        assert!(matches!(r.get("Q"), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn witness_on_wrong_family() {
        let (f, w) = (FamilyRegistry::default(), WitnessRegistry::default());
        assert!(w
            .witness_map(&f, "gamma", &FamilySpec::new("B", Some(3)))
            .is_err());
        assert!(w
            .witness_map(&f, "γ", &FamilySpec::new("S", Some(3)))
            .is_ok());
    }

    #[test]
    fn printed_h_and_sigma() {
        let (f, w) = (FamilyRegistry::default(), WitnessRegistry::default());
        let h = w.witness_map(&f, "h", &FamilySpec::new("D", None)).unwrap();
        assert_eq!(h.get(&Elem::int(1728)), Some(&Elem::int(512)));
        let r = h.get(&Elem::int(-36)).unwrap();
        assert_eq!(r * r, Elem::int(80));
        let s = w
            .witness_map(&f, "sigma", &FamilySpec::new("E", Some(3)))
            .unwrap();
        let u = s.get(&Elem::int(-2)).unwrap();
        assert_eq!(s.get(&Elem::int(-8)), Some(&u.pow(3)));
        // 4u^2 + u - 2 = 0
        let lhs = &(&(&Elem::int(4) * &(u * u)) + u) - &Elem::int(2);
        assert!(lhs.is_zero());
    }

    #[test]
    fn every_witness_is_arithmetic_at_smallest_parameter() {
        let (f, w) = (FamilyRegistry::default(), WitnessRegistry::default());
        for name in w.names() {
            let fam = w.get(name).unwrap().families()[0];
            let n = match f.get(fam).unwrap().param() {
                families::Param::None => None,
                families::Param::Range { min, .. } => Some(min.max(3)),
            };
            let spec = FamilySpec::new(fam, n);
            let map = w.witness_map(&f, name, &spec).unwrap();
            let set = Neighborhood::new(f.elements(&spec).unwrap(), Elem::one()).unwrap();
            assert_eq!(is_arithmetic(&map, &set).unwrap(), None, "{name}");
        }
    }
}
