use std::collections::HashSet;
use std::sync::Arc;

use super::{Element, Group};
use crate::error::{Error, Result};

/// An ordered list of distinct elements of one group.
///
/// The stored order is significant: it binds matrix row/column indices to
/// elements when embedding matrices into the group algebra.
#[derive(Debug, Clone)]
pub struct Subset {
    group: Arc<Group>,
    elems: Vec<Element>,
}

impl Subset {
    pub fn new(group: Arc<Group>, elems: Vec<Element>) -> Result<Subset> {
        let mut seen = HashSet::with_capacity(elems.len());
        for e in &elems {
            if !group.contains(e) {
                return Err(Error::Domain(format!(
                    "{:?} is not an element of {}",
                    e.as_slice(),
                    group.spec()
                )));
            }
            if !seen.insert(e) {
                return Err(Error::Domain(format!(
                    "duplicate element {} in subset",
                    group.format_element(e)
                )));
            }
        }
        Ok(Subset { group, elems })
    }

    /// Parses canonical element strings.
    pub fn parse(group: Arc<Group>, texts: &[impl AsRef<str>]) -> Result<Subset> {
        let elems = texts
            .iter()
            .map(|t| group.parse_element(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Subset::new(group, elems)
    }

    /// `{1}`.
    pub fn identity(group: Arc<Group>) -> Subset {
        let elems = vec![group.identity().clone()];
        Subset { group, elems }
    }

    /// The whole group, in enumeration order.
    pub fn whole(group: Arc<Group>, cap: u64) -> Result<Subset> {
        let elems = group.enumerate(cap)?;
        Ok(Subset { group, elems })
    }

    pub(crate) fn from_distinct(group: Arc<Group>, elems: Vec<Element>) -> Subset {
        debug_assert!(elems.iter().all(|e| group.contains(e)));
        Subset { group, elems }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn elements(&self) -> &[Element] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elems.contains(e)
    }

    pub fn position(&self, e: &Element) -> Option<usize> {
        self.elems.iter().position(|x| x == e)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.elems.iter().map(|e| self.group.format_element(e)).collect()
    }
}
