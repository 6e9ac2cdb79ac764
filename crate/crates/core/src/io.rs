//! JSON files for sets, maps and the claim manifest.
//!
//! Set file: `{"field": "x^3 - x^2 - x - 3", "elements": [...], "distinguished": "..."}`
//! with `field` optional. Map file: `{"codomain": "Qsqrt5", "assignments": [["-36", "4*sqrt(5)"], ...]}`;
//! a map into `R` or `C` whose values need a generator also carries `field`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, FieldDescriptor, Poly, RingDomain};
use crate::constructions::CorpusClaim;
use crate::error::{Error, Result};
use crate::expr::{parse, ElemContext};
use crate::lemma::poly_from_expr;
use crate::nbhd::{ArithmeticMap, Neighborhood};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub elements: Vec<String>,
    pub distinguished: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub codomain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub assignments: Vec<(String, String)>,
}

/// Parses a minimal polynomial written in `x`.
pub fn parse_field(s: &str) -> Result<Arc<FieldDescriptor>> {
    let p = poly_from_expr(&parse(s)?, &["x".to_string()])?;
    let p: Poly = p
        .rational_univariate(0)
        .ok_or_else(|| Error::Parse(format!("`{s}` is not a polynomial in x")))?;
    FieldDescriptor::new(&p)
}

impl SetFile {
    pub fn from_set(set: &Neighborhood) -> Self {
        SetFile {
            field: set.field().map(|f| f.min_poly().to_string()),
            elements: set.elements().iter().map(Elem::to_string).collect(),
            distinguished: set.distinguished().to_string(),
        }
    }

    pub fn to_set(&self) -> Result<Neighborhood> {
        let field = self.field.as_deref().map(parse_field).transpose()?;
        let mut cx = ElemContext::new(field);
        let elements = self
            .elements
            .iter()
            .map(|s| cx.parse(s))
            .collect::<Result<Vec<_>>>()?;
        let r = cx.parse(&self.distinguished)?;
        Neighborhood::new(elements, r)
    }
}

impl MapFile {
    pub fn from_map(map: &ArithmeticMap) -> Self {
        let own = map.codomain().field();
        let field = map
            .iter()
            .find_map(|(_, v)| v.field().cloned())
            .filter(|f| own.as_ref() != Some(f))
            .map(|f| f.min_poly().to_string());
        MapFile {
            codomain: map.codomain().tag(),
            field,
            assignments: map
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        }
    }

    /// Domain elements are read in `domain_field`; values in the codomain's
    /// field, or the declared one.
    pub fn to_map(&self, domain_field: Option<&Arc<FieldDescriptor>>) -> Result<ArithmeticMap> {
        let codomain: RingDomain = self.codomain.parse()?;
        let value_field = match &self.field {
            Some(s) => Some(parse_field(s)?),
            None => codomain.field(),
        };
        let mut xs = ElemContext::new(domain_field.cloned());
        let mut ys = ElemContext::new(value_field);
        let mut map = ArithmeticMap::new(codomain.clone());
        for (x, y) in &self.assignments {
            let (x, y) = (xs.parse(x)?, ys.parse(y)?);
            if map.get(&x).is_some() {
                return Err(Error::InvalidMap(format!("{x} is assigned twice")));
            }
            if !codomain.contains(&y) {
                return Err(Error::NotInCodomain {
                    element: x.to_string(),
                    value: y.to_string(),
                    codomain: codomain.tag(),
                });
            }
            map.insert(x, y);
        }
        Ok(map)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_set(path: &Path) -> Result<Neighborhood> {
    read_json::<SetFile>(path)?.to_set()
}

pub fn read_map(path: &Path, domain_field: Option<&Arc<FieldDescriptor>>) -> Result<ArithmeticMap> {
    read_json::<MapFile>(path)?.to_map(domain_field)
}

pub fn read_manifest(path: &Path) -> Result<Vec<CorpusClaim>> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{FamilyRegistry, FamilySpec, WitnessRegistry};

    fn round_trip(name: &str, spec: FamilySpec, r: Elem) {
        let (f, w) = (FamilyRegistry::default(), WitnessRegistry::default());
        let set = f.neighborhood(&spec, &r).unwrap();
        let sf: SetFile =
            serde_json::from_str(&serde_json::to_string(&SetFile::from_set(&set)).unwrap())
                .unwrap();
        assert_eq!(sf.to_set().unwrap(), set);
        let map = w.witness_map(&f, name, &spec).unwrap();
        let mf: MapFile =
            serde_json::from_str(&serde_json::to_string(&MapFile::from_map(&map)).unwrap())
                .unwrap();
        assert_eq!(mf.to_map(set.field()).unwrap(), map, "{name}");
    }

    #[test]
    fn witnesses_round_trip() {
        round_trip("gamma", FamilySpec::new("S", Some(3)), Elem::int(3));
        round_trip("h", FamilySpec::new("D", None), Elem::int(12));
        round_trip("psi", FamilySpec::new("Bm4", Some(3)), Elem::int(5));
        round_trip("theta", FamilySpec::new("J", Some(5)), Elem::int(5));
        round_trip("sigma", FamilySpec::new("E", Some(3)), Elem::int(9));
    }

    #[test]
    fn declared_field_set() {
        let sf = SetFile {
            field: Some("x^3 - x^2 - x - 3".into()),
            elements: vec!["1".into(), "w".into(), "w^2".into()],
            distinguished: "w".into(),
        };
        let set = sf.to_set().unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(SetFile::from_set(&set).to_set().unwrap(), set);
    }

    #[test]
    fn rejects_bad_maps() {
        let mf = MapFile {
            codomain: "Z".into(),
            field: None,
            assignments: vec![("1".into(), "1/2".into())],
        };
        assert!(matches!(mf.to_map(None), Err(Error::NotInCodomain { .. })));
        let mf = MapFile {
            codomain: "Q".into(),
            field: None,
            assignments: vec![("1".into(), "1".into()), ("2/2".into(), "1".into())],
        };
        assert!(matches!(mf.to_map(None), Err(Error::InvalidMap(_))));
    }
}
