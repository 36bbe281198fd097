use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Result, WmError};
use crate::table::Element;

/// Largest carrier a [`SubSet`] can live in.
pub const MAX_SUBSET_ORDER: usize = 64;

/// A subset of a table's carrier, stored as a bitmask.
///
/// Subsets order by cardinality first, then lexicographically by their
/// sorted member lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubSet {
    parent_order: usize,
    mask: u64,
}

impl SubSet {
    pub fn new(parent_order: usize, members: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut s = Self::empty(parent_order)?;
        for m in members {
            if m >= parent_order {
                return Err(WmError::Bounds {
                    index: m,
                    order: parent_order,
                });
            }
            s.mask |= 1 << m;
        }
        Ok(s)
    }

    pub fn empty(parent_order: usize) -> Result<Self> {
        if parent_order > MAX_SUBSET_ORDER {
            return Err(WmError::Capacity {
                what: "subset representation",
                order: parent_order,
                cap: MAX_SUBSET_ORDER,
            });
        }
        Ok(SubSet {
            parent_order,
            mask: 0,
        })
    }

    pub fn full(parent_order: usize) -> Result<Self> {
        Self::new(parent_order, 0..parent_order)
    }

    /// Panics if bits at or above `parent_order` are set.
    pub fn from_mask(parent_order: usize, mask: u64) -> Self {
        assert!(parent_order <= MAX_SUBSET_ORDER);
        assert!(parent_order == 64 || mask >> parent_order == 0);
        SubSet { parent_order, mask }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    #[inline]
    pub fn contains(&self, a: Element) -> bool {
        a < self.parent_order && self.mask >> a & 1 == 1
    }

    pub(crate) fn insert(&mut self, a: Element) {
        debug_assert!(a < self.parent_order);
        self.mask |= 1 << a;
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.parent_order
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        let mask = self.mask;
        (0..self.parent_order).filter(move |&i| mask >> i & 1 == 1)
    }

    pub fn members(&self) -> Vec<Element> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &SubSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &SubSet) -> SubSet {
        debug_assert_eq!(self.parent_order, other.parent_order);
        SubSet {
            parent_order: self.parent_order,
            mask: self.mask | other.mask,
        }
    }

    pub fn intersect(&self, other: &SubSet) -> SubSet {
        debug_assert_eq!(self.parent_order, other.parent_order);
        SubSet {
            parent_order: self.parent_order,
            mask: self.mask & other.mask,
        }
    }

    /// Sorted comma-separated rendering, e.g. `{0,3}`, using `names` when given.
    pub fn render(&self, names: Option<&[String]>) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|i| match names {
                Some(n) => n[i].clone(),
                None => i.to_string(),
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for SubSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

impl Serialize for SubSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render(None))
    }
}

impl Ord for SubSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.parent_order.cmp(&other.parent_order))
    }
}

impl PartialOrd for SubSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
