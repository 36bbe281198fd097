//! Executable encodings of the derived laws, checked exhaustively on
//! verified instances.
//!
//! Every check is a pure predicate over one *case* (element tuple, bound
//! subsets, hom map, sub-claim tag). [`check_proposition`] walks the whole
//! domain and keeps failing cases as witnesses; [`replay`] re-evaluates a
//! single witness from scratch. Nothing here knows which verdict to expect.

mod eval;
mod ids;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

pub use eval::Case;
pub use ids::{BindingsNeeded, PropositionId};

use crate::axioms::{is_commutative, is_group, verify, Axiom4, Semantics, WitnessPolicy, WmStructure};
use crate::catalog;
use crate::error::{Result, WmError};
use crate::homs::{enumerate_hom_maps, DEFAULT_HOM_CAP};
use crate::subgroups::{SubSet, SubgroupSearch};
use crate::table::Element;
use eval::{evaluate, for_each_case, Ctx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

/// One claim audited on one instance (and one hom target, for hom checks).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionVerdict {
    pub id: PropositionId,
    pub instance: String,
    pub bindings: Option<String>,
    pub verdict: Verdict,
    pub witness: Option<Case>,
    /// Further failing cases, kept only under [`WitnessPolicy::All`].
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub more_witnesses: Vec<Case>,
    pub checked_cases: u64,
    /// No case to check, e.g. a hom check with no homs available.
    pub vacuous: bool,
}

impl PropositionVerdict {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Case> {
        self.witness.iter().chain(&self.more_witnesses)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub semantics: Semantics,
    pub policy: WitnessPolicy,
    pub search: SubgroupSearch,
    /// Largest order on either side of a hom check.
    pub hom_cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            semantics: Semantics::Product,
            policy: WitnessPolicy::First,
            search: SubgroupSearch::default(),
            hom_cap: DEFAULT_HOM_CAP,
        }
    }
}

/// Restricts a check to part of its domain.
#[derive(Debug, Clone, Copy)]
pub enum Binding<'a> {
    /// Only cases whose first bound set is this subset.
    Subgroup(SubSet),
    /// Hom checks run against this target instead of the instance itself.
    Target(&'a WmStructure),
}

struct Cell {
    checked: u64,
    witnesses: Vec<Case>,
}

fn run_cell(
    id: PropositionId,
    g: &Ctx<'_>,
    h: Option<&Ctx<'_>>,
    homs: &[Vec<Element>],
    only: Option<SubSet>,
    policy: WitnessPolicy,
) -> Cell {
    let mut cell = Cell {
        checked: 0,
        witnesses: Vec::new(),
    };
    for_each_case(id, g, h, homs, |case| {
        if only.is_some_and(|s| case.sets.first() != Some(&s)) {
            return;
        }
        cell.checked += 1;
        let keep = policy == WitnessPolicy::All || cell.witnesses.is_empty();
        if !evaluate(id, g, h, case) && keep {
            cell.witnesses.push(case.to_owned());
        }
    });
    cell
}

fn verdict_from(
    id: PropositionId,
    instance: &str,
    bindings: Option<String>,
    cell: Cell,
) -> PropositionVerdict {
    let mut witnesses = cell.witnesses.into_iter();
    let witness = witnesses.next();
    PropositionVerdict {
        id,
        instance: instance.to_string(),
        bindings,
        verdict: if witness.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        witness,
        more_witnesses: witnesses.collect(),
        checked_cases: cell.checked,
        vacuous: cell.checked == 0,
    }
}

fn hom_maps(g: &WmStructure, h: &WmStructure, cap: usize) -> Result<Vec<Vec<Element>>> {
    enumerate_hom_maps(g.table(), h.table(), false, cap)
}

fn catalog_instance_verdict(id: PropositionId, w: &WmStructure) -> PropositionVerdict {
    // the instance is already verified, so the per-instance form of R2.3
    // can only be checked, never fail
    let applicable = id == PropositionId::R2_3
        && is_group(w.table()).holds()
        && is_commutative(w.table()).holds();
    verdict_from(
        id,
        w.name(),
        None,
        Cell {
            checked: applicable as u64,
            witnesses: Vec::new(),
        },
    )
}

/// Evaluates `id` on `w` over its whole domain, or the part selected by
/// `binding`. Hom checks without a target enumerate endomorphisms of `w`.
pub fn check_proposition(
    id: PropositionId,
    w: &WmStructure,
    binding: Option<Binding<'_>>,
    options: CheckOptions,
) -> Result<PropositionVerdict> {
    if id.is_catalog_level() {
        return Ok(catalog_instance_verdict(id, w));
    }
    let g = Ctx::new(w, options.semantics, options.search)?;
    let (only, target) = match binding {
        Some(Binding::Subgroup(s)) => (Some(s), None),
        Some(Binding::Target(t)) => (None, Some(t)),
        None => (None, None),
    };
    if only.is_some_and(|s| s.parent_order() != w.order()) {
        return Err(WmError::usage("bound subset does not live in this instance"));
    }
    if id.bindings_needed() != BindingsNeeded::Hom {
        let cell = run_cell(id, &g, None, &[], only, options.policy);
        let bindings = only.map(|s| format!("S={s}"));
        return Ok(verdict_from(id, w.name(), bindings, cell));
    }
    let t = target.unwrap_or(w);
    let h = Ctx::new(t, options.semantics, options.search)?;
    let homs = hom_maps(w, t, options.hom_cap)?;
    let cell = run_cell(id, &g, Some(&h), &homs, only, options.policy);
    Ok(verdict_from(id, w.name(), Some(format!("target={}", t.name())), cell))
}

/// Re-evaluates the statement of `id` at `case`; `true` when the failure
/// reproduces.
pub fn replay(
    id: PropositionId,
    w: &WmStructure,
    target: Option<&WmStructure>,
    semantics: Semantics,
    case: &Case,
) -> Result<bool> {
    shape_check(id, w, target, case)?;
    let search = SubgroupSearch::default();
    let g = Ctx::new(w, semantics, search)?;
    let h = match target {
        Some(t) => Some(Ctx::new(t, semantics, search)?),
        None if id.bindings_needed() == BindingsNeeded::Hom => Some(Ctx::new(w, semantics, search)?),
        None => None,
    };
    Ok(!evaluate(id, &g, h.as_ref(), case.as_ref()))
}

fn shape_check(id: PropositionId, w: &WmStructure, target: Option<&WmStructure>, case: &Case) -> Result<()> {
    let n = w.order();
    if case.elements.len() != id.variables().len() {
        return Err(WmError::usage(format!(
            "{id} takes {} element values, got {}",
            id.variables().len(),
            case.elements.len()
        )));
    }
    if let Some(&x) = case.elements.iter().find(|&&x| x >= n) {
        return Err(WmError::Bounds { index: x, order: n });
    }
    let sets_needed = match id.bindings_needed() {
        BindingsNeeded::Subset | BindingsNeeded::Subgroup => 1,
        BindingsNeeded::SubgroupPair => 2,
        BindingsNeeded::Hom => match id {
            PropositionId::P2_21_1
            | PropositionId::P2_21_2
            | PropositionId::P2_27_1
            | PropositionId::P2_27_2 => 1,
            _ => 0,
        },
        BindingsNeeded::None | BindingsNeeded::Catalog => 0,
    };
    if case.sets.len() != sets_needed {
        return Err(WmError::usage(format!("{id} binds {sets_needed} subsets")));
    }
    if id.bindings_needed() == BindingsNeeded::Hom {
        let t = target.unwrap_or(w);
        let Some(map) = &case.map else {
            return Err(WmError::usage(format!("{id} needs a hom map")));
        };
        if map.len() != n || map.iter().any(|&y| y >= t.order()) {
            return Err(WmError::usage("hom map does not fit the instances"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceAudit {
    pub instance: String,
    pub mode: Axiom4,
    pub cells: Vec<PropositionVerdict>,
}

impl InstanceAudit {
    /// Cells for `id`: one, or one per hom target.
    pub fn cells_for(&self, id: PropositionId) -> impl Iterator<Item = &PropositionVerdict> {
        self.cells.iter().filter(move |c| c.id == id)
    }

    pub fn row_verdict(&self, id: PropositionId) -> Option<Verdict> {
        let mut cells = self.cells_for(id).peekable();
        cells.peek()?;
        Some(if cells.all(PropositionVerdict::holds) {
            Verdict::Holds
        } else {
            Verdict::Fails
        })
    }
}

/// A claim evaluated once over the built-in catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogVerdict {
    pub id: PropositionId,
    pub verdict: Verdict,
    pub checked_cases: u64,
    pub examples: Vec<CatalogExample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogExample {
    pub instance: String,
    pub claim: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub mode: Axiom4,
    pub semantics: Semantics,
    pub instances: Vec<InstanceAudit>,
    pub catalog: Vec<CatalogVerdict>,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &PropositionVerdict> {
        self.instances
            .iter()
            .flat_map(|i| &i.cells)
            .filter(|c| !c.holds())
    }

    pub fn any_fails(&self) -> bool {
        self.failures().next().is_some() || self.catalog.iter().any(|c| c.verdict == Verdict::Fails)
    }

    pub fn instance(&self, name: &str) -> Option<&InstanceAudit> {
        self.instances.iter().find(|i| i.instance == name)
    }

    /// Proposition × instance grid: `+` holds, `x` fails, `.` vacuous.
    pub fn render_matrix(&self) -> String {
        let mut out = String::new();
        let ids: Vec<PropositionId> = {
            let mut v: Vec<_> = self
                .instances
                .iter()
                .flat_map(|i| i.cells.iter().map(|c| c.id))
                .collect();
            v.sort();
            v.dedup();
            v
        };
        let width = self.instances.len().to_string().len().max(1) + 1;
        let semantics = match self.semantics {
            Semantics::Product => "product",
            Semantics::Solution => "solution",
        };
        let _ = writeln!(out, "mode: {}, semantics: {semantics}", self.mode);
        let _ = write!(out, "{:<8}", "");
        for i in 1..=self.instances.len() {
            let _ = write!(out, "{i:>width$}");
        }
        out.push('\n');
        for id in ids {
            let _ = write!(out, "{:<8}", id.code());
            for inst in &self.instances {
                let cells: Vec<_> = inst.cells_for(id).collect();
                let mark = if cells.iter().any(|c| !c.holds()) {
                    "x"
                } else if cells.iter().all(|c| c.vacuous) {
                    "."
                } else {
                    "+"
                };
                let _ = write!(out, "{mark:>width$}");
            }
            out.push('\n');
        }
        for row in &self.catalog {
            let _ = writeln!(
                out,
                "{:<8}{} over {} catalog cases",
                row.id.code(),
                match row.verdict {
                    Verdict::Holds => " holds",
                    Verdict::Fails => " FAILS",
                },
                row.checked_cases
            );
        }
        out.push('\n');
        for (i, inst) in self.instances.iter().enumerate() {
            let _ = writeln!(out, "{:>width$} {}", i + 1, inst.instance);
        }
        let mut failures = self.failures().peekable();
        if failures.peek().is_some() {
            out.push_str("\nwitnesses:\n");
        }
        for c in failures {
            let _ = write!(out, "  {} on {}", c.id, c.instance);
            if let Some(b) = &c.bindings {
                let _ = write!(out, " ({b})");
            }
            let w = c.witness.as_ref().expect("failing cells carry a witness");
            let _ = writeln!(out, ": {}", w.render(c.id));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditOptions {
    pub check: CheckOptions,
    /// `None` audits every id.
    pub ids: Option<Vec<PropositionId>>,
    /// Worker threads; `0` means rayon's default.
    pub workers: usize,
    pub catalog_rows: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            check: CheckOptions::default(),
            ids: None,
            workers: 0,
            catalog_rows: true,
        }
    }
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| WmError::usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

enum Job {
    Catalog(usize, PropositionId),
    Plain(usize, PropositionId),
    Hom(usize, PropositionId, Option<usize>),
}

/// Runs every selected check on every instance; hom checks pair each
/// instance with every audited instance inside the hom cap. All instances
/// must share one axiom-4 mode.
pub fn audit(instances: &[WmStructure], options: &AuditOptions) -> Result<AuditReport> {
    let mode = instances.first().map_or(Axiom4::Strong, WmStructure::mode);
    if instances.iter().any(|w| w.mode() != mode) {
        return Err(WmError::usage("audited instances must share one axiom-4 mode"));
    }
    let ids: Vec<PropositionId> = options
        .ids
        .clone()
        .unwrap_or_else(|| PropositionId::ALL.to_vec());
    let copts = options.check;
    let cap = copts.hom_cap;

    in_pool(options.workers, || {
        let ctxs: Vec<Ctx<'_>> = instances
            .par_iter()
            .map(|w| Ctx::new(w, copts.semantics, copts.search))
            .collect::<Result<_>>()?;

        let small: Vec<usize> = (0..instances.len())
            .filter(|&i| instances[i].order() <= cap)
            .collect();
        let want_homs = ids.iter().any(|id| id.bindings_needed() == BindingsNeeded::Hom);
        let pairs: Vec<(usize, usize)> = if want_homs {
            small
                .iter()
                .flat_map(|&i| small.iter().map(move |&j| (i, j)))
                .collect()
        } else {
            Vec::new()
        };
        let maps: Vec<Vec<Vec<Element>>> = pairs
            .par_iter()
            .map(|&(i, j)| hom_maps(&instances[i], &instances[j], cap))
            .collect::<Result<_>>()?;
        let maps_for = |i: usize, j: usize| -> &[Vec<Element>] {
            let k = pairs.binary_search(&(i, j)).expect("pair enumerated");
            &maps[k]
        };

        let mut jobs = Vec::new();
        for (i, w) in instances.iter().enumerate() {
            for &id in &ids {
                match id.bindings_needed() {
                    BindingsNeeded::Catalog => jobs.push(Job::Catalog(i, id)),
                    BindingsNeeded::Hom if w.order() <= cap && !small.is_empty() => {
                        jobs.extend(small.iter().map(|&j| Job::Hom(i, id, Some(j))))
                    }
                    BindingsNeeded::Hom => jobs.push(Job::Hom(i, id, None)),
                    _ => jobs.push(Job::Plain(i, id)),
                }
            }
        }
        let cells: Vec<(usize, PropositionVerdict)> = jobs
            .par_iter()
            .map(|job| match *job {
                Job::Catalog(i, id) => (i, catalog_instance_verdict(id, &instances[i])),
                Job::Plain(i, id) => {
                    let cell = run_cell(id, &ctxs[i], None, &[], None, copts.policy);
                    (i, verdict_from(id, instances[i].name(), None, cell))
                }
                Job::Hom(i, id, target) => {
                    let (cell, bindings) = match target {
                        Some(j) => (
                            run_cell(id, &ctxs[i], Some(&ctxs[j]), maps_for(i, j), None, copts.policy),
                            Some(format!("target={}", instances[j].name())),
                        ),
                        None => (
                            Cell {
                                checked: 0,
                                witnesses: Vec::new(),
                            },
                            None,
                        ),
                    };
                    (i, verdict_from(id, instances[i].name(), bindings, cell))
                }
            })
            .collect();

        let mut audits: Vec<InstanceAudit> = instances
            .iter()
            .map(|w| InstanceAudit {
                instance: w.name().to_string(),
                mode: w.mode(),
                cells: Vec::new(),
            })
            .collect();
        for (i, cell) in cells {
            audits[i].cells.push(cell);
        }
        let catalog = if options.catalog_rows {
            ids.iter()
                .filter(|id| id.is_catalog_level())
                .map(|&id| catalog_row(id, mode))
                .collect()
        } else {
            Vec::new()
        };
        Ok(AuditReport {
            mode,
            semantics: copts.semantics,
            instances: audits,
            catalog,
        })
    })?
}

/// The built-in positive controls followed by the permutation group on
/// three letters.
pub fn catalog_pool() -> Vec<catalog::Instance> {
    let mut v = catalog::positive_controls();
    v.push(catalog::sym3());
    v
}

/// Evaluates a catalog-level claim over [`catalog_pool`].
pub fn catalog_row(id: PropositionId, mode: Axiom4) -> CatalogVerdict {
    let pool = catalog_pool();
    let mut examples = Vec::new();
    let (verdict, checked) = match id {
        PropositionId::R2_3 => {
            let groups: Vec<_> = pool
                .iter()
                .filter(|i| is_group(&i.table).holds() && is_commutative(&i.table).holds())
                .collect();
            for inst in &groups {
                if let Err(report) = verify(&inst.table, mode) {
                    examples.push(CatalogExample {
                        instance: inst.name().to_string(),
                        claim: "commutative group fails verification".into(),
                        witness: report.violations[0].to_string(),
                    });
                }
            }
            (examples.is_empty(), groups.len() as u64)
        }
        PropositionId::R2_4 => {
            let wm_not_group = pool.iter().find_map(|i| {
                verify(&i.table, mode).ok()?;
                is_group(&i.table).witness().map(|f| (i.name(), f.to_string()))
            });
            let group_not_wm = pool.iter().find_map(|i| {
                if !is_group(&i.table).holds() {
                    return None;
                }
                verify(&i.table, mode)
                    .err()
                    .map(|r| (i.name(), r.violations[0].to_string()))
            });
            let found = wm_not_group.is_some() && group_not_wm.is_some();
            if let Some((instance, witness)) = wm_not_group {
                examples.push(CatalogExample {
                    instance: instance.to_string(),
                    claim: "Wm-group that is not a group".into(),
                    witness,
                });
            }
            if let Some((instance, witness)) = group_not_wm {
                examples.push(CatalogExample {
                    instance: instance.to_string(),
                    claim: "group that is not a Wm-group".into(),
                    witness,
                });
            }
            (found, pool.len() as u64)
        }
        _ => panic!("{id} is not a catalog-level claim"),
    };
    CatalogVerdict {
        id,
        verdict: if verdict {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        checked_cases: checked,
        examples,
    }
}

/// Kernel of one hom with its subgroup and normality verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelRow {
    pub source: String,
    pub target: String,
    pub map: Vec<Element>,
    pub kernel: SubSet,
    pub is_subgroup: bool,
    pub is_normal: bool,
}

/// Every hom between every ordered pair of instances inside the hom cap.
pub fn kernel_matrix(instances: &[WmStructure], options: &AuditOptions) -> Result<Vec<KernelRow>> {
    let copts = options.check;
    let small: Vec<&WmStructure> = instances
        .iter()
        .filter(|w| w.order() <= copts.hom_cap)
        .collect();
    let pairs: Vec<(usize, usize)> = (0..small.len())
        .flat_map(|i| (0..small.len()).map(move |j| (i, j)))
        .collect();
    in_pool(options.workers, || {
        let rows: Vec<Vec<KernelRow>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (g, h) = (small[i], small[j]);
                let ctx = Ctx::new(g, copts.semantics, copts.search)?;
                Ok(hom_maps(g, h, copts.hom_cap)?
                    .into_iter()
                    .map(|map| {
                        let kernel = SubSet::new(
                            g.order(),
                            (0..g.order()).filter(|&r| map[r] == map[g.identity(r)]),
                        )
                        .expect("fits");
                        KernelRow {
                            source: g.name().to_string(),
                            target: h.name().to_string(),
                            is_subgroup: ctx.is_subgroup(&kernel),
                            is_normal: crate::subgroups::is_normal(g, &kernel).holds(),
                            map,
                            kernel,
                        }
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().flatten().collect())
    })?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify;

    fn strong(inst: catalog::Instance) -> WmStructure {
        verify(&inst.table, Axiom4::Strong).unwrap()
    }

    fn check(id: PropositionId, w: &WmStructure) -> PropositionVerdict {
        check_proposition(id, w, None, CheckOptions::default()).unwrap()
    }

    #[test]
    fn neg_add_five_bracket_law_witness() {
        let w = strong(catalog::neg_add(5).unwrap());
        let v = check(PropositionId::P2_9_1, &w);
        assert_eq!(v.verdict, Verdict::Fails);
        let case = v.witness.unwrap();
        // [r] = 2r mod 5, so [r]*m = -2r-m
        let (r, m) = (case.elements[0], case.elements[1]);
        assert_ne!((10 * 5 - 2 * r - m) % 5, m);
        assert!(replay(PropositionId::P2_9_1, &w, None, Semantics::Product, &case).unwrap());
    }

    #[test]
    fn right_projection_bracket_law_holds() {
        let w = strong(catalog::right_projection(3).unwrap());
        assert!(check(PropositionId::P2_9_1, &w).holds());
    }

    #[test]
    fn cyclic_commutation_iff() {
        let w = strong(catalog::cyclic(4).unwrap());
        let v = check(PropositionId::P2_11_5, &w);
        assert!(v.holds());
        assert_eq!(v.checked_cases, 16);
    }

    #[test]
    fn relation_k_failure_localizes_to_reflexivity() {
        let w = strong(catalog::neg_add(6).unwrap());
        let s = SubSet::new(6, [0, 3]).unwrap();
        let v = check_proposition(
            PropositionId::P2_17,
            &w,
            Some(Binding::Subgroup(s)),
            CheckOptions::default(),
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
        assert_eq!(v.witness.unwrap().part, Some('a'));
    }

    #[test]
    fn hom_check_without_homs_is_vacuous() {
        let w = strong(catalog::cyclic(8).unwrap());
        let report = audit(
            std::slice::from_ref(&w),
            &AuditOptions {
                ids: Some(vec![PropositionId::P2_26]),
                ..Default::default()
            },
        )
        .unwrap();
        let cell = &report.instances[0].cells[0];
        assert!(cell.vacuous && cell.holds() && cell.checked_cases == 0);
    }

    #[test]
    fn catalog_rows_hold_in_strong_mode() {
        for id in [PropositionId::R2_3, PropositionId::R2_4] {
            let row = catalog_row(id, Axiom4::Strong);
            assert_eq!(row.verdict, Verdict::Holds, "{row:?}");
        }
        assert_eq!(catalog_row(PropositionId::R2_4, Axiom4::Strong).examples.len(), 2);
    }

    #[test]
    fn replay_rejects_malformed_cases() {
        let w = strong(catalog::cyclic(3).unwrap());
        let case = Case {
            elements: vec![0],
            sets: vec![],
            map: None,
            part: None,
        };
        assert!(replay(PropositionId::P2_7, &w, None, Semantics::Product, &case).is_err());
    }
}
