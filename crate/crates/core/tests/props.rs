use std::collections::BTreeMap;

use wm_core::axioms::{verify, Axiom4, Semantics, WitnessPolicy, WmStructure};
use wm_core::catalog;
use wm_core::props::{
    audit, check_proposition, replay, AuditOptions, BindingsNeeded, Binding, Case, CheckOptions, PropositionId,
    Verdict,
};
use wm_core::{enumerate_wm_groups, SubSet};

fn strong(t: &wm_core::CayleyTable) -> WmStructure {
    verify(t, Axiom4::Strong).unwrap()
}

fn controls() -> Vec<WmStructure> {
    catalog::small_controls(6).iter().map(|i| strong(&i.table)).collect()
}

fn element_ids() -> Vec<PropositionId> {
    PropositionId::ALL
        .iter()
        .copied()
        .filter(|id| !matches!(id.bindings_needed(), BindingsNeeded::Hom | BindingsNeeded::Catalog))
        .collect()
}

#[test]
fn every_witness_replays() {
    let instances = controls();
    let by_name: BTreeMap<&str, &WmStructure> = instances.iter().map(|w| (w.name(), w)).collect();
    for semantics in [Semantics::Product, Semantics::Solution] {
        let opts = AuditOptions {
            check: CheckOptions {
                semantics,
                policy: WitnessPolicy::All,
                ..Default::default()
            },
            ids: Some(element_ids()),
            ..Default::default()
        };
        let report = audit(&instances, &opts).unwrap();
        let mut seen = 0;
        for cell in report.failures() {
            let w = by_name[cell.instance.as_str()];
            for case in cell.witnesses() {
                assert!(replay(cell.id, w, None, semantics, case).unwrap(), "{} {case:?}", cell.id);
                seen += 1;
            }
        }
        assert!(seen > 0);
    }
}

#[test]
fn hom_witnesses_replay_against_their_target() {
    let instances = controls();
    let by_name: BTreeMap<&str, &WmStructure> = instances.iter().map(|w| (w.name(), w)).collect();
    let report = audit(&instances, &AuditOptions::default()).unwrap();
    for cell in report.failures().filter(|c| c.id.bindings_needed() == BindingsNeeded::Hom) {
        let target = cell.bindings.as_deref().and_then(|b| b.strip_prefix("target=")).map(|n| by_name[n]);
        let case = cell.witness.as_ref().unwrap();
        assert!(replay(cell.id, by_name[cell.instance.as_str()], target, Semantics::Product, case).unwrap());
    }
}

#[test]
fn holding_cases_do_not_replay() {
    let w = strong(&catalog::cyclic(4).unwrap().table);
    let case = Case {
        elements: vec![1, 2],
        ..Default::default()
    };
    assert!(!replay(PropositionId::P2_9_1, &w, None, Semantics::Product, &case).unwrap());
    let wrong_shape = Case {
        elements: vec![1],
        ..Default::default()
    };
    assert!(replay(PropositionId::P2_9_1, &w, None, Semantics::Product, &wrong_shape).is_err());
}

#[test]
fn forced_rows_hold_on_every_control() {
    let instances = controls();
    let opts = AuditOptions {
        ids: Some(PropositionId::FORCED.to_vec()),
        ..Default::default()
    };
    let report = audit(&instances, &opts).unwrap();
    assert_eq!(report.failures().count(), 0);
    for inst in &report.instances {
        for &id in PropositionId::FORCED {
            assert_eq!(inst.row_verdict(id), Some(Verdict::Holds), "{id} on {}", inst.instance);
        }
    }
}

#[test]
fn enumerated_classes_reproduce_catalog_verdicts() {
    let ids = element_ids();
    let opts = AuditOptions {
        ids: Some(ids),
        catalog_rows: false,
        ..Default::default()
    };
    let small: Vec<WmStructure> = catalog::small_controls(4).iter().map(|i| strong(&i.table)).collect();
    let reps: Vec<WmStructure> = (1..=4)
        .flat_map(|n| enumerate_wm_groups(n, Axiom4::Strong).unwrap().representatives())
        .map(|t| strong(&t))
        .collect();
    let ours = audit(&small, &opts).unwrap();
    let theirs = audit(&reps, &opts).unwrap();
    for (w, row) in small.iter().zip(&ours.instances) {
        let form = wm_core::canonical_form(w.table()).unwrap();
        let k = reps
            .iter()
            .position(|r| wm_core::canonical_form(r.table()).unwrap() == form)
            .unwrap_or_else(|| panic!("{} has no enumerated class", w.name()));
        let a: Vec<_> = row.cells.iter().map(|c| (c.id, c.verdict)).collect();
        let b: Vec<_> = theirs.instances[k].cells.iter().map(|c| (c.id, c.verdict)).collect();
        assert_eq!(a, b, "{} vs {}", w.name(), reps[k].name());
    }
}

#[test]
fn non_surjective_homs_break_image_of_preimage() {
    // f(f⁻¹(S')) = S' needs every element of S' to be hit
    let c2 = strong(&catalog::cyclic(2).unwrap().table);
    let c4 = strong(&catalog::cyclic(4).unwrap().table);
    let v = check_proposition(PropositionId::P2_27_2, &c4, Some(Binding::Target(&c2)), CheckOptions::default())
        .unwrap();
    assert_eq!(v.verdict, Verdict::Fails);
    let case = v.witness.unwrap();
    assert_eq!(case.part, Some('c'));
    let map = case.map.clone().unwrap();
    let hit: Vec<_> = (0..2).filter(|y| map.contains(y)).collect();
    assert!(hit.len() < 2);
    assert!(replay(PropositionId::P2_27_2, &c4, Some(&c2), Semantics::Product, &case).unwrap());
}

#[test]
fn subgroup_binding_restricts_the_domain() {
    let w = strong(&catalog::neg_add(6).unwrap().table);
    let good = SubSet::new(6, [0, 2, 4]).unwrap();
    let bad = SubSet::new(6, [0, 3]).unwrap();
    let opts = CheckOptions::default();
    let v = check_proposition(PropositionId::P2_17, &w, Some(Binding::Subgroup(good)), opts).unwrap();
    assert_eq!(v.verdict, Verdict::Holds);
    assert_eq!(v.bindings.as_deref(), Some("S={0,2,4}"));
    let v = check_proposition(PropositionId::P2_17, &w, Some(Binding::Subgroup(bad)), opts).unwrap();
    assert_eq!(v.verdict, Verdict::Fails);
}

#[test]
fn readings_of_left_division_agree_on_strong_structures() {
    let instances = controls();
    let audit_with = |semantics| {
        let opts = AuditOptions {
            check: CheckOptions {
                semantics,
                ..Default::default()
            },
            ids: Some(element_ids()),
            ..Default::default()
        };
        let r = audit(&instances, &opts).unwrap();
        r.instances
            .iter()
            .flat_map(|i| i.cells.iter().map(|c| (c.instance.clone(), c.id, c.verdict)))
            .collect::<Vec<_>>()
    };
    assert_eq!(audit_with(Semantics::Product), audit_with(Semantics::Solution));
}
