use serde::Serialize;

use crate::error::{Result, WmError};
use crate::table::{CayleyTable, Element};

/// Default largest order for canonical forms (`n!` relabelings).
pub const DEFAULT_CANON_CAP: usize = 7;

/// The lexicographically least row-major flattening over all relabelings
/// of a table. Equal forms mean bijectively isomorphic tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalForm {
    pub order: usize,
    pub flat: Vec<Element>,
}

impl CanonicalForm {
    pub fn to_table(&self) -> CayleyTable {
        CayleyTable::from_flat(self.order, self.flat.clone()).expect("canonical forms are valid tables")
    }
}

/// Advances `p` to the next permutation in lexicographic order; returns
/// `false` after the last one.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("pivot exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

pub fn canonical_form(t: &CayleyTable) -> Result<CanonicalForm> {
    canonical_form_with_cap(t, DEFAULT_CANON_CAP)
}

pub fn canonical_form_with_cap(t: &CayleyTable, cap: usize) -> Result<CanonicalForm> {
    let n = t.order();
    if n > cap {
        return Err(WmError::Capacity {
            what: "canonical form",
            order: n,
            cap,
        });
    }
    Ok(canonical_form_unchecked(t))
}

pub(crate) fn canonical_form_unchecked(t: &CayleyTable) -> CanonicalForm {
    let n = t.order();
    // `old_of[new]` is the element that receives label `new`
    let mut old_of: Vec<usize> = (0..n).collect();
    let mut new_of = vec![0; n];
    let mut best: Vec<Element> = t.flat().to_vec();
    loop {
        for (new, &old) in old_of.iter().enumerate() {
            new_of[old] = new;
        }
        let mut less = false;
        'cells: for i in 0..n {
            let row = t.row(old_of[i]);
            for j in 0..n {
                let k = i * n + j;
                let v = new_of[row[old_of[j]]];
                if less {
                    best[k] = v;
                } else if v < best[k] {
                    less = true;
                    best[k] = v;
                } else if v > best[k] {
                    break 'cells;
                }
            }
        }
        if !next_permutation(&mut old_of) {
            break;
        }
    }
    CanonicalForm { order: n, flat: best }
}

/// Bijective isomorphism, decided by comparing canonical forms.
pub fn are_isomorphic(a: &CayleyTable, b: &CayleyTable) -> Result<bool> {
    if a.order() != b.order() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn next_permutation_counts() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }

    #[test]
    fn z4_forms_agree() {
        let a = catalog::cyclic(4).unwrap().table;
        let b = catalog::paper_z4().table;
        assert!(are_isomorphic(&a, &b).unwrap());
        let klein = catalog::abelian_product(&[2, 2]).unwrap().table;
        assert!(!are_isomorphic(&a, &klein).unwrap());
    }

    #[test]
    fn projection_and_successor_differ() {
        let p = catalog::right_projection(2).unwrap().table;
        let s = catalog::involution_rows(2, &[1, 0]).unwrap().table;
        assert!(!are_isomorphic(&p, &s).unwrap());
    }

    #[test]
    fn form_is_a_relabeling_minimum() {
        // brute force: materialize every relabeling and take the minimum
        let t = catalog::neg_add(4).unwrap().table;
        let mut perm: Vec<usize> = (0..4).collect();
        let mut min: Option<Vec<usize>> = None;
        loop {
            let r = t.relabel(&perm).unwrap();
            let f = r.flat().to_vec();
            if min.as_ref().is_none_or(|m| f < *m) {
                min = Some(f);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(canonical_form(&t).unwrap().flat, min.unwrap());
    }

    #[test]
    fn cap_enforced() {
        let t = catalog::cyclic(8).unwrap().table;
        assert!(matches!(canonical_form(&t), Err(WmError::Capacity { .. })));
        assert!(canonical_form_with_cap(&t, 8).is_ok());
    }
}
