//! JSON shapes for exact values: a rational is a string such as `"-3/4"`, a
//! field element is `{"field": [min poly coeffs], "coords": [...]}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{Elem, FieldDescriptor};
use super::poly::Poly;
use super::rational::{parse_rational, Rational};

pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

fn strings(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(rational_to_string).collect()
}

fn parse_all(ss: &[String]) -> crate::Result<Vec<Rational>> {
    ss.iter().map(|s| parse_rational(s)).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ElemWire {
    Rational(String),
    Field {
        field: Vec<String>,
        coords: Vec<String>,
    },
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.field() {
            None => ElemWire::Rational(rational_to_string(&self.coords()[0])),
            Some(k) => ElemWire::Field {
                field: strings(k.min_poly().coeffs()),
                coords: strings(self.coords()),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match ElemWire::deserialize(d)? {
            ElemWire::Rational(s) => parse_rational(&s)
                .map(Elem::rational)
                .map_err(D::Error::custom),
            ElemWire::Field { field, coords } => {
                let build = || -> crate::Result<Elem> {
                    let k = FieldDescriptor::new(&Poly::new(parse_all(&field)?))?;
                    Elem::from_coords(Some(&k), parse_all(&coords)?)
                };
                build().map_err(D::Error::custom)
            }
        }
    }
}
