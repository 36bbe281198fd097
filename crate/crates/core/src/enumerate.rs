//! Model finder: every Wm-group of a small order, up to isomorphism.
//!
//! The search fills the table one row at a time. Unique solvability on a
//! finite carrier forces every row to be a permutation, so rows are chosen
//! from the `n!` permutations; columns are left free. Two propagation
//! rules prune the tree:
//!
//! * semi-commutativity `(r*m)*n = (m*r)*n` says rows `r*m` and `m*r` are
//!   equal, so once one of them is known the other is forced;
//! * in strong mode the compatible inverse of `m` is forced to be
//!   `s = m⁻¹(m⁻¹(m))` (applying the inverse permutation of row `m`
//!   twice), and its row must be the inverse permutation of row `m`.
//!
//! Subtrees under each choice of row 0 are independent and are searched on
//! a rayon pool; merging sorts canonical forms, so the output does not
//! depend on the worker count.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{is_commutative, is_group, verify, Axiom, Axiom4, AxiomViolation};
use crate::catalog::{serialize, Instance};
use crate::error::{Result, WmError};
use crate::homs::{canonical_form_unchecked, next_permutation, CanonicalForm};
use crate::table::CayleyTable;

pub const DEFAULT_ENUMERATION_CAP: usize = 5;
/// Orders above this are refused even with the long-run flag.
pub const LONG_RUN_ORDER: usize = 6;
pub const NAIVE_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub cap: usize,
    /// Unlocks order 6.
    pub long_run: bool,
    /// Worker threads; `0` means rayon's default.
    pub workers: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            long_run: false,
            workers: 0,
        }
    }
}

impl EnumerationOptions {
    fn check(&self, n: usize) -> Result<()> {
        let limit = if self.long_run {
            self.cap.max(LONG_RUN_ORDER)
        } else {
            self.cap
        }
        .min(LONG_RUN_ORDER);
        if n == 0 {
            return Err(WmError::usage("order must be positive"));
        }
        if n > limit {
            return Err(WmError::Capacity {
                what: "Wm-group enumeration",
                order: n,
                cap: limit,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub canonical: CanonicalForm,
    pub is_group: bool,
    pub is_commutative: bool,
}

impl ClassInfo {
    fn new(canonical: CanonicalForm) -> Self {
        let t = canonical.to_table();
        ClassInfo {
            is_group: is_group(&t).holds(),
            is_commutative: is_commutative(&t).holds(),
            canonical,
        }
    }

    pub fn table(&self) -> CayleyTable {
        self.canonical.to_table()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClassStats {
    pub groups: usize,
    pub commutative: usize,
    /// Commutative groups.
    pub both: usize,
    pub neither: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    pub order: usize,
    pub mode: Axiom4,
    /// One entry per isomorphism class, sorted by canonical form.
    pub classes: Vec<ClassInfo>,
    /// Labeled tables found before isomorphism reduction.
    pub total_tables: u64,
    pub stats: ClassStats,
}

impl EnumerationResult {
    fn from_forms(order: usize, mode: Axiom4, forms: BTreeSet<CanonicalForm>, total_tables: u64) -> Self {
        let classes: Vec<ClassInfo> = forms.into_iter().map(ClassInfo::new).collect();
        let mut stats = ClassStats::default();
        for c in &classes {
            stats.groups += c.is_group as usize;
            stats.commutative += c.is_commutative as usize;
            stats.both += (c.is_group && c.is_commutative) as usize;
            stats.neither += (!c.is_group && !c.is_commutative) as usize;
        }
        EnumerationResult {
            order,
            mode,
            classes,
            total_tables,
            stats,
        }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn representatives(&self) -> Vec<CayleyTable> {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.table()
                    .with_name(format!("wm{}_{}_{:02}", self.order, self.mode, i))
            })
            .collect()
    }

    pub fn contains_class_of(&self, t: &CayleyTable) -> bool {
        t.order() == self.order
            && self
                .classes
                .binary_search_by(|c| c.canonical.cmp(&canonical_form_unchecked(t)))
                .is_ok()
    }

    /// Writes one `wmtable` file per class plus `summary.json` into `dir`.
    pub fn export(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        #[derive(Serialize)]
        struct Entry<'a> {
            file: String,
            canonical: &'a [usize],
            is_group: bool,
            is_commutative: bool,
        }
        #[derive(Serialize)]
        struct Summary<'a> {
            order: usize,
            mode: Axiom4,
            total_tables: u64,
            classes: usize,
            stats: ClassStats,
            representatives: Vec<Entry<'a>>,
        }
        let mut entries = Vec::new();
        for (c, t) in self.classes.iter().zip(self.representatives()) {
            let file = format!("{}.wmtable", t.name().expect("named"));
            let inst = Instance::new(t, "enumerate");
            std::fs::write(dir.join(&file), serialize(&inst))?;
            entries.push(Entry {
                file,
                canonical: &c.canonical.flat,
                is_group: c.is_group,
                is_commutative: c.is_commutative,
            });
        }
        let summary = Summary {
            order: self.order,
            mode: self.mode,
            total_tables: self.total_tables,
            classes: self.classes.len(),
            stats: self.stats,
            representatives: entries,
        };
        let json = serde_json::to_string_pretty(&summary).expect("serializable");
        std::fs::write(dir.join("summary.json"), json + "\n")?;
        Ok(())
    }
}

struct RowSpace {
    n: usize,
    perms: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl RowSpace {
    fn new(n: usize) -> Self {
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.push(p.clone());
            if !next_permutation(&mut p) {
                break;
            }
        }
        let index: BTreeMap<Vec<usize>, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let inverse = perms
            .iter()
            .map(|p| {
                let mut q = vec![0; n];
                for (i, &v) in p.iter().enumerate() {
                    q[v] = i;
                }
                index[&q]
            })
            .collect();
        RowSpace { n, perms, inverse }
    }
}

const UNSET: usize = usize::MAX;

struct Search<'a> {
    space: &'a RowSpace,
    mode: Axiom4,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn at(&self, rows: &[usize], r: usize, x: usize) -> usize {
        self.space.perms[rows[r]][x]
    }

    /// Sets `rows[i] = p` or checks it; `None` on conflict, `Some(changed)` otherwise.
    fn force(rows: &mut [usize], i: usize, p: usize) -> Option<bool> {
        if rows[i] == UNSET {
            rows[i] = p;
            Some(true)
        } else {
            (rows[i] == p).then_some(false)
        }
    }

    fn propagate(&self, rows: &mut [usize]) -> bool {
        let n = self.space.n;
        loop {
            let mut changed = false;
            for r in 0..n {
                if rows[r] == UNSET {
                    continue;
                }
                if self.mode == Axiom4::Strong {
                    let inv = self.space.inverse[rows[r]];
                    let bracket = self.space.perms[inv][r];
                    let s = self.space.perms[inv][bracket];
                    match Self::force(rows, s, inv) {
                        None => return false,
                        Some(c) => changed |= c,
                    }
                }
                for m in 0..n {
                    if rows[m] == UNSET {
                        continue;
                    }
                    let a = self.at(rows, r, m);
                    let b = self.at(rows, m, r);
                    if a == b {
                        continue;
                    }
                    let (pa, pb) = (rows[a], rows[b]);
                    let result = match (pa == UNSET, pb == UNSET) {
                        (false, false) => (pa == pb).then_some(false),
                        (false, true) => Self::force(rows, b, pa),
                        (true, false) => Self::force(rows, a, pb),
                        (true, true) => Some(false),
                    };
                    match result {
                        None => return false,
                        Some(c) => changed |= c,
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn has_left_inverses(&self, rows: &[usize]) -> bool {
        let n = self.space.n;
        (0..n).all(|r| {
            let bracket = self.space.perms[self.space.inverse[rows[r]]][r];
            (0..n).any(|s| self.at(rows, s, r) == bracket && self.at(rows, s, bracket) == s)
        })
    }

    fn run(&mut self, mut rows: Vec<usize>) {
        if !self.propagate(&mut rows) {
            return;
        }
        let Some(next) = rows.iter().position(|&p| p == UNSET) else {
            if self.has_left_inverses(&rows) {
                let flat = rows
                    .iter()
                    .flat_map(|&p| self.space.perms[p].iter().copied())
                    .collect();
                self.found.push(flat);
            }
            return;
        };
        for p in 0..self.space.perms.len() {
            let mut child = rows.clone();
            child[next] = p;
            self.run(child);
        }
    }
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| WmError::usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Every labeled table of order `n` found by the pruned search, sorted.
pub fn labeled_tables(n: usize, mode: Axiom4, options: EnumerationOptions) -> Result<Vec<Vec<usize>>> {
    options.check(n)?;
    let space = RowSpace::new(n);
    let subtrees: Vec<Vec<Vec<usize>>> = with_pool(options.workers, || {
        (0..space.perms.len())
            .into_par_iter()
            .map(|p| {
                let mut search = Search {
                    space: &space,
                    mode,
                    found: Vec::new(),
                };
                let mut rows = vec![UNSET; n];
                rows[0] = p;
                search.run(rows);
                search.found
            })
            .collect()
    })?;
    let mut all: Vec<Vec<usize>> = subtrees.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    Ok(all)
}

pub fn enumerate_wm_groups(n: usize, mode: Axiom4) -> Result<EnumerationResult> {
    enumerate_wm_groups_with(n, mode, EnumerationOptions::default())
}

pub fn enumerate_wm_groups_with(
    n: usize,
    mode: Axiom4,
    options: EnumerationOptions,
) -> Result<EnumerationResult> {
    let tables = labeled_tables(n, mode, options)?;
    let total = tables.len() as u64;
    let forms: Vec<CanonicalForm> = with_pool(options.workers, || {
        tables
            .par_iter()
            .map(|flat| {
                canonical_form_unchecked(&CayleyTable::from_flat(n, flat.clone()).expect("valid"))
            })
            .collect()
    })?;
    Ok(EnumerationResult::from_forms(n, mode, forms.into_iter().collect(), total))
}

/// Unpruned scan of all `n^(n²)` tables through [`verify`]; a cross-check
/// for the pruned search.
pub fn naive_enumerate(n: usize, mode: Axiom4) -> Result<EnumerationResult> {
    if n == 0 {
        return Err(WmError::usage("order must be positive"));
    }
    if n > NAIVE_CAP {
        return Err(WmError::Capacity {
            what: "naive enumeration",
            order: n,
            cap: NAIVE_CAP,
        });
    }
    let cells = n * n;
    let mut flat = vec![0; cells];
    let mut forms = BTreeSet::new();
    let mut total = 0u64;
    loop {
        let t = CayleyTable::from_flat(n, flat.clone()).expect("valid");
        if verify(&t, mode).is_ok() {
            total += 1;
            forms.insert(canonical_form_unchecked(&t));
        }
        // odometer increment
        let Some(i) = (0..cells).rev().find(|&i| flat[i] + 1 < n) else {
            break;
        };
        flat[i] += 1;
        flat[i + 1..].iter_mut().for_each(|x| *x = 0);
    }
    Ok(EnumerationResult::from_forms(n, mode, forms, total))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub canonical: CanonicalForm,
    pub violation: AxiomViolation,
}

/// Classes that pass the weak reading of axiom 4 but not the strong one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationDiff {
    pub order: usize,
    pub weak_classes: usize,
    pub strong_classes: usize,
    pub entries: Vec<DiffEntry>,
}

pub fn enumeration_diff(n: usize, options: EnumerationOptions) -> Result<EnumerationDiff> {
    let weak = enumerate_wm_groups_with(n, Axiom4::Weak, options)?;
    let strong = enumerate_wm_groups_with(n, Axiom4::Strong, options)?;
    let entries = weak
        .classes
        .iter()
        .filter_map(|c| match verify(&c.table(), Axiom4::Strong) {
            Ok(_) => None,
            Err(report) => Some(DiffEntry {
                canonical: c.canonical.clone(),
                violation: report
                    .of(Axiom::A4Compat)
                    .next()
                    .cloned()
                    .unwrap_or_else(|| report.violations[0].clone()),
            }),
        })
        .collect();
    Ok(EnumerationDiff {
        order: n,
        weak_classes: weak.class_count(),
        strong_classes: strong.class_count(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn order_one_and_two() {
        for mode in [Axiom4::Weak, Axiom4::Strong] {
            assert_eq!(enumerate_wm_groups(1, mode).unwrap().class_count(), 1);
            let two = enumerate_wm_groups(2, mode).unwrap();
            assert_eq!(two.class_count(), 3);
            assert_eq!(two.total_tables, 4);
        }
    }

    #[test]
    fn order_two_classes_are_the_named_ones() {
        let two = enumerate_wm_groups(2, Axiom4::Strong).unwrap();
        for inst in [
            catalog::cyclic(2).unwrap(),
            catalog::right_projection(2).unwrap(),
            catalog::involution_rows(2, &[1, 0]).unwrap(),
        ] {
            assert!(two.contains_class_of(&inst.table), "{}", inst.name());
        }
    }

    #[test]
    fn caps() {
        let e = enumerate_wm_groups(6, Axiom4::Strong).unwrap_err();
        assert!(matches!(e, WmError::Capacity { order: 6, cap: 5, .. }));
        let opts = EnumerationOptions {
            long_run: true,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_wm_groups_with(7, Axiom4::Strong, opts),
            Err(WmError::Capacity { .. })
        ));
        assert!(matches!(naive_enumerate(4, Axiom4::Strong), Err(WmError::Capacity { .. })));
    }

    #[test]
    fn diff_is_empty_at_small_orders() {
        for n in 1..=2 {
            assert!(enumeration_diff(n, EnumerationOptions::default())
                .unwrap()
                .entries
                .is_empty());
        }
    }

    #[test]
    fn export_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let res = enumerate_wm_groups(2, Axiom4::Strong).unwrap();
        res.export(dir.path()).unwrap();
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary["classes"], 3);
        let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(files.len(), 4);
    }
}
