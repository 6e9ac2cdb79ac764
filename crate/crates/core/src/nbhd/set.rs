use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{Elem, FieldDescriptor};
use crate::error::{Error, Result};

/// A finite set `A` with a distinguished element `r`.
///
/// Elements are kept in canonical order; an element's position is its stable
/// identifier in constraint systems and proof traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    elements: Vec<Elem>,
    distinguished: Elem,
    field: Option<Arc<FieldDescriptor>>,
}

impl Neighborhood {
    pub fn new(elements: Vec<Elem>, distinguished: Elem) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSet("empty set".into()));
        }
        let mut seen = BTreeSet::new();
        let mut field: Option<Arc<FieldDescriptor>> = None;
        for e in &elements {
            if !seen.insert(e.clone()) {
                return Err(Error::DuplicateElement(e.to_string()));
            }
            if let Some(f) = e.field() {
                match &field {
                    Some(g) if g != f => return Err(Error::FieldMismatch(g.name(), f.name())),
                    _ => field = Some(f.clone()),
                }
            }
        }
        if !seen.contains(&distinguished) {
            return Err(Error::InvalidSet(format!(
                "distinguished element {distinguished} is not in the set"
            )));
        }
        Ok(Neighborhood {
            elements: seen.into_iter().collect(),
            distinguished,
            field,
        })
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn distinguished(&self) -> &Elem {
        &self.distinguished
    }

    pub fn distinguished_index(&self) -> usize {
        self.index_of(&self.distinguished)
            .expect("distinguished is a member")
    }

    pub fn field(&self) -> Option<&Arc<FieldDescriptor>> {
        self.field.as_ref()
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.index_of(e).is_some()
    }

    pub fn with_distinguished(&self, r: &Elem) -> Result<Self> {
        if !self.contains(r) {
            return Err(Error::InvalidSet(format!("{r} is not in the set")));
        }
        Ok(Neighborhood {
            distinguished: r.clone(),
            ..self.clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_foreign_r() {
        let e = |n| Elem::int(n);
        assert!(matches!(
            Neighborhood::new(vec![e(1), e(2), e(1)], e(1)),
            Err(Error::DuplicateElement(_))
        ));
        assert!(Neighborhood::new(vec![e(1), e(2)], e(3)).is_err());
        assert!(Neighborhood::new(vec![], e(3)).is_err());
    }

    #[test]
    fn canonical_order() {
        let a = Neighborhood::new(
            vec![Elem::int(3), Elem::frac(-1, 2), Elem::int(1)],
            Elem::int(3),
        )
        .unwrap();
        assert_eq!(
            a.elements(),
            &[Elem::frac(-1, 2), Elem::int(1), Elem::int(3)]
        );
        assert_eq!(a.distinguished_index(), 2);
    }
}
