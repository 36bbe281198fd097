//! Wm-subgroups, cosets, the relation `K`, quotients, normality,
//! conjugate sets, set products and `[G]`.
//!
//! Products of three factors are left-associated. Cosets may fail to
//! partition the carrier and `K` may fail to be an equivalence; both
//! outcomes come back as values.

mod subset;

pub use subset::{SubSet, MAX_SUBSET_ORDER};

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::axioms::{verify, AxiomReport, AxiomViolation, Semantics, WmStructure};
use crate::check::Check;
use crate::error::{Result, WmError};
use crate::table::{CayleyTable, Element};

/// Default largest order for the exhaustive subset scan.
pub const DEFAULT_SUBGROUP_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum SubgroupFailure {
    /// `a * b` leaves the subset.
    NotClosed { a: Element, b: Element, product: Element },
    /// The restricted table fails an axiom; the witness is in parent indices.
    Axiom { violation: AxiomViolation },
}

fn require_nonempty(s: &SubSet) -> Result<()> {
    if s.is_empty() {
        Err(WmError::usage("a Wm-subgroup candidate must be nonempty"))
    } else {
        Ok(())
    }
}

fn first_closure_failure(t: &CayleyTable, s: &SubSet) -> Option<(Element, Element, Element)> {
    s.iter()
        .flat_map(|a| s.iter().map(move |b| (a, b)))
        .map(|(a, b)| (a, b, t.mul(a, b)))
        .find(|&(_, _, p)| !s.contains(p))
}

pub(crate) fn is_closed(t: &CayleyTable, s: &SubSet) -> bool {
    s.iter()
        .all(|a| s.iter().all(|b| s.contains(t.mul(a, b))))
}

/// `S` is closed and the restricted table passes verification in the
/// same mode as `w`.
pub fn is_wm_subgroup_direct(w: &WmStructure, s: &SubSet) -> Result<Check<SubgroupFailure>> {
    require_nonempty(s)?;
    let t = w.table();
    if let Some((a, b, product)) = first_closure_failure(t, s) {
        return Ok(Check::Fails(SubgroupFailure::NotClosed { a, b, product }));
    }
    let members = s.members();
    let restricted = t.restrict(&members).expect("closed subset");
    Ok(match verify(&restricted, w.mode()) {
        Ok(_) => Check::Holds,
        Err(report) => {
            let mut violation = report.violations[0].clone();
            for x in &mut violation.witness {
                *x = members[*x];
            }
            Check::Fails(SubgroupFailure::Axiom { violation })
        }
    })
}

/// Boolean form of [`is_wm_subgroup_direct`]; the empty set is not a subgroup.
pub fn is_subgroup(w: &WmStructure, s: &SubSet) -> bool {
    !s.is_empty() && is_wm_subgroup_direct(w, s).map(|c| c.holds()).unwrap_or(false)
}

/// `m⁻¹ * r ∈ S` for all `r, m ∈ S`. The witness is `(r, m, m⁻¹*r)`.
pub fn satisfies_closure_criterion(
    w: &WmStructure,
    s: &SubSet,
    semantics: Semantics,
) -> Result<Check<(Element, Element, Element)>> {
    require_nonempty(s)?;
    Ok(Check::from_first(
        s.iter()
            .flat_map(|r| s.iter().map(move |m| (r, m)))
            .map(|(r, m)| (r, m, w.left_div(m, r, semantics)))
            .find(|&(_, _, v)| !s.contains(v)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubgroupStrategy {
    /// Scan every nonempty subset.
    #[default]
    Exhaustive,
    /// Generate closed subsets by repeated closure, then verify them.
    Closure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgroupSearch {
    pub cap: usize,
    pub strategy: SubgroupStrategy,
}

impl Default for SubgroupSearch {
    fn default() -> Self {
        SubgroupSearch {
            cap: DEFAULT_SUBGROUP_CAP,
            strategy: SubgroupStrategy::Exhaustive,
        }
    }
}

pub fn enumerate_subgroups(w: &WmStructure, normal_only: bool) -> Result<Vec<SubSet>> {
    enumerate_subgroups_with(w, normal_only, SubgroupSearch::default())
}

pub fn enumerate_subgroups_with(
    w: &WmStructure,
    normal_only: bool,
    search: SubgroupSearch,
) -> Result<Vec<SubSet>> {
    let n = w.order();
    if n > search.cap.min(MAX_SUBSET_ORDER - 1) {
        return Err(WmError::Capacity {
            what: "subgroup enumeration",
            order: n,
            cap: search.cap,
        });
    }
    let t = w.table();
    let candidates: Vec<SubSet> = match search.strategy {
        SubgroupStrategy::Exhaustive => (1u64..1 << n)
            .map(|mask| SubSet::from_mask(n, mask))
            .filter(|s| is_closed(t, s))
            .collect(),
        SubgroupStrategy::Closure => closed_subsets(t),
    };
    let mut out: Vec<SubSet> = candidates
        .into_iter()
        .filter(|s| is_subgroup(w, s))
        .filter(|s| !normal_only || is_normal(w, s).holds())
        .collect();
    out.sort();
    Ok(out)
}

fn closure_of(t: &CayleyTable, mut s: SubSet) -> SubSet {
    loop {
        let mut grown = s;
        for a in s.iter() {
            for b in s.iter() {
                grown.insert(t.mul(a, b));
            }
        }
        if grown == s {
            return s;
        }
        s = grown;
    }
}

/// Every nonempty subset closed under the operation.
fn closed_subsets(t: &CayleyTable) -> Vec<SubSet> {
    let n = t.order();
    let mut seen: HashSet<SubSet> = HashSet::new();
    let mut frontier: Vec<SubSet> = (0..n)
        .map(|x| closure_of(t, SubSet::from_mask(n, 1 << x)))
        .collect();
    while let Some(c) = frontier.pop() {
        if !seen.insert(c) {
            continue;
        }
        for x in 0..n {
            if !c.contains(x) {
                let mut next = c;
                next.insert(x);
                let next = closure_of(t, next);
                if !seen.contains(&next) {
                    frontier.push(next);
                }
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    #[default]
    Right,
}

impl std::str::FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(format!("unknown side `{other}` (expected left|right)")),
        }
    }
}

/// `S * r = {s * r : s ∈ S}`.
pub fn right_coset(w: &WmStructure, s: &SubSet, r: Element) -> SubSet {
    let mut out = SubSet::from_mask(s.parent_order(), 0);
    for x in s.iter() {
        out.insert(w.mul(x, r));
    }
    out
}

/// `r * S = {r * s : s ∈ S}`.
pub fn left_coset(w: &WmStructure, s: &SubSet, r: Element) -> SubSet {
    let mut out = SubSet::from_mask(s.parent_order(), 0);
    for x in s.iter() {
        out.insert(w.mul(r, x));
    }
    out
}

pub fn coset(w: &WmStructure, s: &SubSet, r: Element, side: Side) -> SubSet {
    match side {
        Side::Right => right_coset(w, s, r),
        Side::Left => left_coset(w, s, r),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetPartition {
    pub subgroup: SubSet,
    pub side: Side,
    /// Distinct cosets in order of first appearance over `r = 0, 1, ..`.
    pub blocks: Vec<SubSet>,
    /// `labels[r]` is the index in `blocks` of the coset of `r`.
    pub labels: Vec<usize>,
    pub is_partition: bool,
    /// An element lying in two distinct blocks, with the block indices.
    pub overlap_witness: Option<(Element, usize, usize)>,
    /// An element lying in no block.
    pub uncovered_witness: Option<Element>,
}

pub fn coset_partition(w: &WmStructure, s: &SubSet, side: Side) -> CosetPartition {
    let n = w.order();
    let mut blocks: Vec<SubSet> = Vec::new();
    let mut labels = Vec::with_capacity(n);
    for r in 0..n {
        let c = coset(w, s, r, side);
        let idx = match blocks.iter().position(|b| *b == c) {
            Some(i) => i,
            None => {
                blocks.push(c);
                blocks.len() - 1
            }
        };
        labels.push(idx);
    }
    let mut overlap_witness = None;
    let mut uncovered_witness = None;
    for x in 0..n {
        let holders: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].contains(x)).collect();
        match holders.as_slice() {
            [] => {
                uncovered_witness.get_or_insert(x);
            }
            [_] => {}
            [i, j, ..] => {
                overlap_witness.get_or_insert((x, *i, *j));
            }
        }
    }
    CosetPartition {
        subgroup: *s,
        side,
        blocks,
        labels,
        is_partition: overlap_witness.is_none() && uncovered_witness.is_none(),
        overlap_witness,
        uncovered_witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "property", rename_all = "lowercase")]
pub enum KFailure {
    /// not `r K r`
    Reflexive { r: Element },
    /// `r K m` but not `m K r`
    Symmetric { r: Element, m: Element },
    /// `r K m` and `m K n` but not `r K n`
    Transitive { r: Element, m: Element, n: Element },
}

/// The relation `r K m ⟺ r = s * m for some s ∈ S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KRelation {
    pub subgroup: SubSet,
    /// All related pairs `(r, m)` in lexicographic order.
    pub pairs: Vec<(Element, Element)>,
    pub is_equivalence: bool,
    /// The first failing property, checked in the order reflexive, symmetric, transitive.
    pub failure: Option<KFailure>,
    /// Equivalence classes, present when `is_equivalence`.
    pub classes: Option<Vec<SubSet>>,
    /// Whether the classes coincide with the distinct right cosets.
    pub classes_match_cosets: Option<bool>,
}

/// `r K m`, computed from the right coset `S * m`.
pub fn k_related(w: &WmStructure, s: &SubSet, r: Element, m: Element) -> bool {
    right_coset(w, s, m).contains(r)
}

pub fn relation_k(w: &WmStructure, s: &SubSet) -> KRelation {
    let n = w.order();
    let cosets: Vec<SubSet> = (0..n).map(|m| right_coset(w, s, m)).collect();
    let rel = |r: Element, m: Element| cosets[m].contains(r);
    let pairs: Vec<(Element, Element)> = (0..n)
        .flat_map(|r| (0..n).map(move |m| (r, m)))
        .filter(|&(r, m)| rel(r, m))
        .collect();

    let failure = (0..n)
        .find(|&r| !rel(r, r))
        .map(|r| KFailure::Reflexive { r })
        .or_else(|| {
            pairs
                .iter()
                .find(|&&(r, m)| !rel(m, r))
                .map(|&(r, m)| KFailure::Symmetric { r, m })
        })
        .or_else(|| {
            pairs.iter().find_map(|&(r, m)| {
                (0..n)
                    .find(|&k| rel(m, k) && !rel(r, k))
                    .map(|k| KFailure::Transitive { r, m, n: k })
            })
        });

    let (classes, classes_match_cosets) = if failure.is_none() {
        let mut classes: BTreeSet<SubSet> = BTreeSet::new();
        for m in 0..n {
            let class = SubSet::new(n, (0..n).filter(|&r| rel(r, m))).expect("in range");
            classes.insert(class);
        }
        let distinct_cosets: BTreeSet<SubSet> = cosets.iter().copied().collect();
        let matches = classes == distinct_cosets;
        (Some(classes.into_iter().collect()), Some(matches))
    } else {
        (None, None)
    };

    KRelation {
        subgroup: *s,
        pairs,
        is_equivalence: failure.is_none(),
        failure,
        classes,
        classes_match_cosets,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientResult {
    pub cosets: CosetPartition,
    /// Representative-independence of `(S*r)(S*m) = S*(r*m)`.
    pub well_defined: bool,
    /// `(r, r', m, m')` with `S*r = S*r'`, `S*m = S*m'` but `S*(r*m) != S*(r'*m')`.
    pub failure_witness: Option<[Element; 4]>,
    /// Over coset indices; present iff well-defined and the cosets partition the carrier.
    pub table: Option<CayleyTable>,
    /// Verification of `table` in the mode of the parent structure.
    pub verification: Option<std::result::Result<WmStructure, AxiomReport>>,
}

impl QuotientResult {
    pub fn is_wm_group(&self) -> bool {
        matches!(self.verification, Some(Ok(_)))
    }
}

/// Right cosets `S * r`, the induced operation and its verification.
pub fn quotient(w: &WmStructure, s: &SubSet) -> QuotientResult {
    let n = w.order();
    let cosets = coset_partition(w, s, Side::Right);
    let label = &cosets.labels;
    let mut failure_witness = None;
    'outer: for r in 0..n {
        for r2 in (0..n).filter(|&x| label[x] == label[r]) {
            for m in 0..n {
                for m2 in (0..n).filter(|&x| label[x] == label[m]) {
                    if label[w.mul(r, m)] != label[w.mul(r2, m2)] {
                        failure_witness = Some([r, r2, m, m2]);
                        break 'outer;
                    }
                }
            }
        }
    }
    let well_defined = failure_witness.is_none();

    let (table, verification) = if well_defined && cosets.is_partition {
        let k = cosets.blocks.len();
        let reps: Vec<Element> = (0..k)
            .map(|i| label.iter().position(|&l| l == i).expect("every block has a representative"))
            .collect();
        let table = CayleyTable::from_fn(k, |i, j| label[w.mul(reps[i], reps[j])])
            .expect("well-formed quotient")
            .with_name(format!("{}|{}", w.name(), s));
        let v = verify(&table, w.mode());
        (Some(table), Some(v))
    } else {
        (None, None)
    };

    QuotientResult {
        cosets,
        well_defined,
        failure_witness,
        table,
        verification,
    }
}

/// `[z] ∈ S` for every `z`; witness: the offending `z`.
pub fn is_normal(w: &WmStructure, s: &SubSet) -> Check<Element> {
    Check::from_first((0..w.order()).find(|&z| !s.contains(w.identity(z))))
}

/// A Wm-subgroup that is also normal.
pub fn is_normal_subgroup(w: &WmStructure, s: &SubSet) -> bool {
    is_subgroup(w, s) && is_normal(w, s).holds()
}

/// `{r⁻¹ * s * r}` for `Side::Left`, `{r * s * r⁻¹}` for `Side::Right`.
pub fn conjugate_set(w: &WmStructure, s: &SubSet, r: Element, side: Side) -> SubSet {
    let inv = w.inverse(r);
    let mut out = SubSet::from_mask(s.parent_order(), 0);
    for x in s.iter() {
        out.insert(match side {
            Side::Left => w.mul(w.mul(inv, x), r),
            Side::Right => w.mul(w.mul(r, x), inv),
        });
    }
    out
}

/// `S * R = {s * p : s ∈ S, p ∈ R}`.
pub fn product_set(w: &WmStructure, s: &SubSet, r: &SubSet) -> SubSet {
    let mut out = SubSet::from_mask(s.parent_order(), 0);
    for a in s.iter() {
        for b in r.iter() {
            out.insert(w.mul(a, b));
        }
    }
    out
}

pub fn intersect(s: &SubSet, r: &SubSet) -> SubSet {
    s.intersect(r)
}

pub fn union(s: &SubSet, r: &SubSet) -> SubSet {
    s.union(r)
}

/// `[G]` two ways: the fixed points `{r : r = [r]}` and the image `{[r]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BracketG {
    pub fixed_points: SubSet,
    pub image: SubSet,
}

pub fn bracket_g(w: &WmStructure) -> Result<BracketG> {
    let n = w.order();
    Ok(BracketG {
        fixed_points: SubSet::new(n, (0..n).filter(|&r| w.identity(r) == r))?,
        image: SubSet::new(n, (0..n).map(|r| w.identity(r)))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{verify, Axiom4};
    use crate::catalog;

    fn strong(inst: catalog::Instance) -> WmStructure {
        verify(&inst.table, Axiom4::Strong).unwrap()
    }

    fn set(n: usize, m: &[usize]) -> SubSet {
        SubSet::new(n, m.iter().copied()).unwrap()
    }

    #[test]
    fn direct_check_on_neg_add6() {
        let w = strong(catalog::neg_add(6).unwrap());
        assert!(is_wm_subgroup_direct(&w, &set(6, &[0, 3])).unwrap().holds());
        assert_eq!(
            is_wm_subgroup_direct(&w, &set(6, &[0, 1])).unwrap(),
            Check::Fails(SubgroupFailure::NotClosed { a: 0, b: 1, product: 5 })
        );
        assert!(is_wm_subgroup_direct(&w, &SubSet::full(6).unwrap()).unwrap().holds());
        assert!(is_wm_subgroup_direct(&w, &SubSet::empty(6).unwrap()).is_err());
    }

    #[test]
    fn closure_criterion() {
        let w = strong(catalog::neg_add(6).unwrap());
        assert!(satisfies_closure_criterion(&w, &set(6, &[0, 2, 4]), Semantics::Product)
            .unwrap()
            .holds());
        assert_eq!(
            satisfies_closure_criterion(&w, &set(6, &[0, 1]), Semantics::Product).unwrap(),
            Check::Fails((0, 1, 5))
        );
        let p = strong(catalog::right_projection(4).unwrap());
        for mask in 1u64..16 {
            let s = SubSet::from_mask(4, mask);
            assert!(satisfies_closure_criterion(&p, &s, Semantics::Product).unwrap().holds());
        }
    }

    #[test]
    fn neg_add6_subgroups_include_expected() {
        let w = strong(catalog::neg_add(6).unwrap());
        let subs = enumerate_subgroups(&w, false).unwrap();
        for m in [&[0][..], &[2], &[4], &[0, 3], &[0, 2, 4], &[0, 1, 2, 3, 4, 5]] {
            assert!(subs.contains(&set(6, m)), "missing {m:?}");
        }
    }

    #[test]
    fn cyclic4_subgroups_are_classical() {
        let w = strong(catalog::cyclic(4).unwrap());
        let subs: Vec<String> = enumerate_subgroups(&w, false)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(subs, ["{0}", "{0,2}", "{0,1,2,3}"]);
    }

    #[test]
    fn right_projection3_every_subset_is_a_subgroup() {
        let w = strong(catalog::right_projection(3).unwrap());
        assert_eq!(enumerate_subgroups(&w, false).unwrap().len(), 7);
    }

    #[test]
    fn closure_strategy_matches_exhaustive() {
        for inst in catalog::small_controls(8) {
            let w = strong(inst);
            let closure = SubgroupSearch {
                strategy: SubgroupStrategy::Closure,
                ..Default::default()
            };
            assert_eq!(
                enumerate_subgroups(&w, false).unwrap(),
                enumerate_subgroups_with(&w, false, closure).unwrap(),
                "{}",
                w.name()
            );
        }
    }

    #[test]
    fn enumeration_cap() {
        let w = strong(catalog::cyclic(5).unwrap());
        let tight = SubgroupSearch {
            cap: 4,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_subgroups_with(&w, false, tight),
            Err(WmError::Capacity { .. })
        ));
    }

    #[test]
    fn cosets() {
        let w = strong(catalog::neg_add(6).unwrap());
        assert_eq!(right_coset(&w, &set(6, &[0, 3]), 1), set(6, &[2, 5]));
        let p = strong(catalog::right_projection(4).unwrap());
        assert_eq!(right_coset(&p, &set(4, &[0, 1, 2]), 3), set(4, &[3]));
        assert_eq!(left_coset(&p, &set(4, &[0, 1, 2]), 3), set(4, &[0, 1, 2]));
    }

    #[test]
    fn relation_k_on_neg_add6() {
        let w = strong(catalog::neg_add(6).unwrap());
        let k = relation_k(&w, &set(6, &[0, 3]));
        assert!(!k.is_equivalence);
        assert_eq!(k.failure, Some(KFailure::Reflexive { r: 1 }));

        let k = relation_k(&w, &set(6, &[0, 2, 4]));
        assert!(k.is_equivalence);
        assert_eq!(
            k.classes.unwrap(),
            vec![set(6, &[0, 2, 4]), set(6, &[1, 3, 5])]
        );
        assert_eq!(k.classes_match_cosets, Some(true));
    }

    #[test]
    fn relation_k_on_cyclic4() {
        let w = strong(catalog::cyclic(4).unwrap());
        let k = relation_k(&w, &set(4, &[0, 2]));
        assert!(k.is_equivalence);
        assert_eq!(k.classes.unwrap(), vec![set(4, &[0, 2]), set(4, &[1, 3])]);
    }

    #[test]
    fn quotient_of_cyclic4() {
        let w = strong(catalog::cyclic(4).unwrap());
        let q = quotient(&w, &set(4, &[0, 2]));
        assert!(q.well_defined && q.cosets.is_partition);
        assert_eq!(q.table.as_ref().unwrap().flat(), &[0, 1, 1, 0]);
        assert!(q.is_wm_group());
    }

    #[test]
    fn quotient_of_neg_add6_by_order_two() {
        let w = strong(catalog::neg_add(6).unwrap());
        let q = quotient(&w, &set(6, &[0, 3]));
        assert!(q.cosets.is_partition);
        let blocks: BTreeSet<SubSet> = q.cosets.blocks.iter().copied().collect();
        let expected: BTreeSet<SubSet> =
            [set(6, &[2, 5]), set(6, &[1, 4]), set(6, &[0, 3])].into_iter().collect();
        assert_eq!(blocks, expected);
    }

    #[test]
    fn quotient_of_right_projection_has_singleton_cosets() {
        let w = strong(catalog::right_projection(4).unwrap());
        let q = quotient(&w, &set(4, &[0, 1]));
        assert!(q.cosets.blocks.iter().all(|b| b.len() == 1));
        assert!(q.cosets.is_partition);
    }

    #[test]
    fn normality_and_conjugates() {
        let w = strong(catalog::neg_add(6).unwrap());
        assert!(is_normal(&w, &set(6, &[0, 2, 4])).holds());
        assert_eq!(is_normal(&w, &set(6, &[0, 3])), Check::Fails(1));
        let s = set(6, &[0, 2, 4]);
        assert_eq!(conjugate_set(&w, &s, 1, Side::Left), s);

        let p = strong(catalog::right_projection(3).unwrap());
        assert_eq!(conjugate_set(&p, &set(3, &[0]), 2, Side::Left), set(3, &[2]));
        assert!(!is_normal(&p, &set(3, &[0])).holds());
    }

    #[test]
    fn products_intersections_unions() {
        let w = strong(catalog::neg_add(6).unwrap());
        let (s, r) = (set(6, &[0, 3]), set(6, &[0, 2, 4]));
        assert!(product_set(&w, &s, &r).is_full());
        assert_eq!(intersect(&s, &r), set(6, &[0]));
        assert_eq!(union(&set(6, &[0]), &s), s);
    }

    #[test]
    fn bracket_g_examples() {
        let w = strong(catalog::neg_add(6).unwrap());
        let b = bracket_g(&w).unwrap();
        assert_eq!(b.fixed_points, set(6, &[0, 2, 4]));
        assert_eq!(b.image, set(6, &[0, 2, 4]));
        let g = strong(catalog::cyclic(5).unwrap());
        let b = bracket_g(&g).unwrap();
        assert_eq!((b.fixed_points, b.image), (set(5, &[0]), set(5, &[0])));
        let p = strong(catalog::right_projection(3).unwrap());
        let b = bracket_g(&p).unwrap();
        assert!(b.fixed_points.is_full() && b.image.is_full());
    }
}
