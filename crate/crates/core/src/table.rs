//! Operation tables.
//!
//! A [`CayleyTable`] stores an order-`n` binary operation on the carrier
//! `{0, .., n-1}` as a flat row-major grid: `entries[a * n + b] = a * b`.
//! Every other module works on these tables.

use serde::Serialize;

use crate::error::{Result, WmError};

/// An element of a table's carrier, identified by its index.
pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CayleyTable {
    order: usize,
    entries: Vec<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl CayleyTable {
    /// Builds a table from its rows. Rejects the empty carrier, ragged
    /// grids and out-of-range entries.
    pub fn from_rows(rows: &[Vec<Element>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(WmError::usage("a table needs a non-empty carrier"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(WmError::usage(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(WmError::Bounds { index: v, order: n });
                }
                entries.push(v);
            }
        }
        Ok(CayleyTable {
            order: n,
            entries,
            name: None,
        })
    }

    /// Builds a table from a flat row-major grid.
    pub fn from_flat(order: usize, entries: Vec<Element>) -> Result<Self> {
        if order == 0 {
            return Err(WmError::usage("a table needs a non-empty carrier"));
        }
        if entries.len() != order * order {
            return Err(WmError::usage(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        if let Some(&v) = entries.iter().find(|&&v| v >= order) {
            return Err(WmError::Bounds { index: v, order });
        }
        Ok(CayleyTable {
            order,
            entries,
            name: None,
        })
    }

    /// Tabulates `f` over every pair of the carrier.
    pub fn from_fn(order: usize, f: impl Fn(Element, Element) -> Element) -> Result<Self> {
        let entries = (0..order)
            .flat_map(|a| (0..order).map(move |b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        Self::from_flat(order, entries)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn flat(&self) -> &[Element] {
        &self.entries
    }

    pub fn row(&self, a: Element) -> &[Element] {
        &self.entries[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        self.entries.chunks(self.order)
    }

    /// `a * b`, panicking on out-of-range indices. Use [`CayleyTable::op`]
    /// for checked access.
    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        debug_assert!(a < self.order && b < self.order);
        self.entries[a * self.order + b]
    }

    pub fn op(&self, a: Element, b: Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    pub fn check_element(&self, a: Element) -> Result<()> {
        if a < self.order {
            Ok(())
        } else {
            Err(WmError::Bounds {
                index: a,
                order: self.order,
            })
        }
    }

    /// Left-associated product `((a1 * a2) * a3) * ...`.
    pub fn lprod(&self, factors: &[Element]) -> Result<Element> {
        let (&first, rest) = factors
            .split_first()
            .ok_or_else(|| WmError::usage("lprod needs at least one factor"))?;
        self.check_element(first)?;
        rest.iter().try_fold(first, |acc, &x| self.op(acc, x))
    }

    /// Applies the relabeling `perm` (old index to new index):
    /// the result satisfies `new[perm[a]][perm[b]] = perm[old[a][b]]`.
    pub fn relabel(&self, perm: &[Element]) -> Result<CayleyTable> {
        let n = self.order;
        if !is_permutation(perm, n) {
            return Err(WmError::usage(format!(
                "relabeling must be a permutation of 0..{n}"
            )));
        }
        let mut entries = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                entries[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        Ok(CayleyTable {
            order: n,
            entries,
            name: self.name.clone(),
        })
    }

    /// The table restricted to `members`, relabeled `members[i] -> i`.
    /// Returns `None` when `members` is not closed under the operation.
    pub fn restrict(&self, members: &[Element]) -> Option<CayleyTable> {
        let k = members.len();
        if k == 0 {
            return None;
        }
        let mut local = vec![usize::MAX; self.order];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
        }
        let mut entries = Vec::with_capacity(k * k);
        for &a in members {
            for &b in members {
                let v = local[self.mul(a, b)];
                if v == usize::MAX {
                    return None;
                }
                entries.push(v);
            }
        }
        Some(CayleyTable {
            order: k,
            entries,
            name: None,
        })
    }
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg_add(n: usize) -> CayleyTable {
        CayleyTable::from_fn(n, |a, b| (2 * n - a - b) % n).unwrap()
    }

    #[test]
    fn op_matches_direct_evaluation() {
        // -(2 + 4) mod 5 = 4
        assert_eq!(neg_add(5).op(2, 4).unwrap(), 4);
        let proj = CayleyTable::from_fn(3, |_, b| b).unwrap();
        assert_eq!(proj.op(0, 2).unwrap(), 2);
    }

    #[test]
    fn op_rejects_out_of_range() {
        let t = neg_add(3);
        assert_eq!(t.op(3, 0), Err(WmError::Bounds { index: 3, order: 3 }));
    }

    #[test]
    fn lprod_folds_left() {
        // (1*2)*3 = -(-3 + 3) = 0 in Z_7
        assert_eq!(neg_add(7).lprod(&[1, 2, 3]).unwrap(), 0);
        assert_eq!(neg_add(7).lprod(&[4]).unwrap(), 4);
        assert!(matches!(neg_add(7).lprod(&[]), Err(WmError::Usage(_))));
    }

    #[test]
    fn construction_rejects_bad_grids() {
        assert!(CayleyTable::from_rows(&[]).is_err());
        assert!(CayleyTable::from_rows(&[vec![0, 1], vec![0]]).is_err());
        assert!(CayleyTable::from_rows(&[vec![0, 2], vec![0, 1]]).is_err());
        assert!(CayleyTable::from_rows(&[vec![0]]).is_ok());
    }

    #[test]
    fn relabel_round_trips_through_inverse() {
        let t = neg_add(5);
        let perm = [3, 0, 4, 1, 2];
        let mut inv = [0; 5];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let back = t.relabel(&perm).unwrap().relabel(&inv).unwrap();
        assert_eq!(back, t);
        assert!(t.relabel(&[0, 0, 1, 2, 3]).is_err());
    }

    #[test]
    fn restrict_detects_closure() {
        let t = neg_add(6);
        let sub = t.restrict(&[0, 3]).unwrap();
        assert_eq!(sub.flat(), &[0, 1, 1, 0]);
        assert!(t.restrict(&[0, 1]).is_none());
    }
}
