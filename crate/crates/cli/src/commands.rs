use std::fmt::Write as _;

use serde_json::{json, Value};
use wm_core::axioms::{is_commutative, is_group, verify_with, WitnessPolicy, WmStructure};
use wm_core::catalog::{self, Instance};
use wm_core::enumerate::{enumerate_wm_groups_with, enumeration_diff, EnumerationOptions};
use wm_core::homs::{enumerate_homs_with_cap, kernel, DEFAULT_HOM_CAP};
use wm_core::props::{
    audit, check_proposition, kernel_matrix, AuditOptions, AuditReport, Binding, CheckOptions,
    InstanceAudit,
};
use wm_core::subgroups::{
    bracket_g, coset_partition, enumerate_subgroups_with, is_normal, is_wm_subgroup_direct,
    quotient, relation_k, Side, SubgroupSearch,
};
use wm_core::{Result, SubSet, WmError};

use crate::args::{CatalogAction, Command, Global, PropsArgs};
use crate::input;

/// What a command produced: both renderings and the exit code.
pub struct Output {
    pub json: Value,
    pub text: String,
    /// `true` when the command checked something and found it failing.
    pub failing: bool,
}

impl Output {
    fn new(command: &str, mut json: Value, text: String, failing: bool) -> Self {
        if let Value::Object(map) = &mut json {
            map.insert("command".into(), Value::String(command.into()));
        }
        Output { json, text, failing }
    }
}

fn names(inst: &Instance) -> Option<&[String]> {
    inst.element_names.as_deref()
}

fn render(inst: &Instance, s: &SubSet) -> String {
    s.render(names(inst))
}

fn render_tuple(inst: &Instance, xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| inst.element_name(x)).collect();
    format!("({})", parts.join(", "))
}

fn policy(g: &Global) -> WitnessPolicy {
    if g.all_witnesses {
        WitnessPolicy::All
    } else {
        WitnessPolicy::First
    }
}

fn search(g: &Global) -> SubgroupSearch {
    let mut s = SubgroupSearch::default();
    if let Some(cap) = g.cap {
        s.cap = cap;
    }
    s
}

/// Verifies or returns the failing report as an `Output`.
fn structure(g: &Global, inst: &Instance, command: &str) -> std::result::Result<WmStructure, Output> {
    verify_with(&inst.table, g.axiom4, WitnessPolicy::First).map_err(|report| {
        let text = format!(
            "{}: not a Wm-group ({}); run `wm check` for witnesses\n",
            inst.name(),
            g.axiom4
        );
        let json = json!({
            "instance": inst.name(),
            "mode": g.axiom4,
            "verdict": "not-wm-group",
            "violations": report.violations,
        });
        Output::new(command, json, text, true)
    })
}

macro_rules! verified {
    ($g:expr, $inst:expr, $cmd:expr) => {
        match structure($g, $inst, $cmd) {
            Ok(w) => w,
            Err(out) => return Ok(out),
        }
    };
}

pub fn run(g: &Global, command: &Command) -> Result<Output> {
    match command {
        Command::Check { input } => check(g, &input::load(input)?),
        Command::Info { input } => info(g, &input::load(input)?),
        Command::Subgroups {
            input,
            normal,
            count_only,
        } => subgroups(g, &input::load(input)?, *normal, *count_only),
        Command::Cosets {
            input,
            subgroup,
            side,
        } => cosets(g, &input::load(input)?, subgroup, *side),
        Command::Quotient { input, subgroup } => quotient_cmd(g, &input::load(input)?, subgroup),
        Command::Homs {
            source,
            target,
            iso,
            count_only,
        } => homs(g, &input::load(source)?, &input::load(target)?, *iso, *count_only),
        Command::Enumerate {
            order,
            count_only,
            long_run,
            diff,
            export,
        } => enumerate(g, *order, *count_only, *long_run, *diff, export.as_deref()),
        Command::Props(args) => props(g, args),
        Command::Catalog { action } => catalog_cmd(action),
    }
}

fn check(g: &Global, inst: &Instance) -> Result<Output> {
    let t = &inst.table;
    let result = verify_with(t, g.axiom4, policy(g));
    let group = is_group(t).holds();
    let commutative = is_commutative(t).holds();
    let mut text = String::new();
    let (verdict, violations) = match &result {
        Ok(_) => {
            let _ = writeln!(text, "{} (order {}): Wm-group ({})", inst.name(), t.order(), g.axiom4);
            ("wm-group", Vec::new())
        }
        Err(report) => {
            let _ = writeln!(text, "{} (order {}): not a Wm-group ({})", inst.name(), t.order(), g.axiom4);
            for v in &report.violations {
                let _ = writeln!(
                    text,
                    "  {} witness {}: {}",
                    v.axiom,
                    render_tuple(inst, &v.witness),
                    v.detail
                );
            }
            ("not-wm-group", report.violations.clone())
        }
    };
    let _ = writeln!(text, "  group: {group}, commutative: {commutative}");
    let json = json!({
        "instance": inst.name(),
        "order": t.order(),
        "mode": g.axiom4,
        "verdict": verdict,
        "is_group": group,
        "is_commutative": commutative,
        "violations": violations,
    });
    Ok(Output::new("check", json, text, result.is_err()))
}

fn info(g: &Global, inst: &Instance) -> Result<Output> {
    let w = verified!(g, inst, "info");
    let bg = bracket_g(&w)?;
    let mut text = format!("{} (order {}, {})\n", inst.name(), w.order(), g.axiom4);
    let mut elements = Vec::new();
    for r in 0..w.order() {
        let _ = writeln!(
            text,
            "  {:>6}  identity {:<6} inverse {:<6} candidates {}",
            inst.element_name(r),
            inst.element_name(w.identity(r)),
            inst.element_name(w.inverse(r)),
            render_tuple(inst, w.inverse_candidates(r))
        );
        elements.push(json!({
            "element": r,
            "identity": w.identity(r),
            "inverse": w.inverse(r),
            "inverse_candidates": w.inverse_candidates(r),
        }));
    }
    let _ = writeln!(
        text,
        "  [G] fixed points {}, image {}",
        render(inst, &bg.fixed_points),
        render(inst, &bg.image)
    );
    let json = json!({
        "instance": inst.name(),
        "order": w.order(),
        "mode": g.axiom4,
        "element_names": inst.element_names,
        "elements": elements,
        "bracket_g": bg,
    });
    Ok(Output::new("info", json, text, false))
}

fn subgroups(g: &Global, inst: &Instance, normal: bool, count_only: bool) -> Result<Output> {
    let w = verified!(g, inst, "subgroups");
    let list = enumerate_subgroups_with(&w, normal, search(g))?;
    let mut text = String::new();
    let mut json = json!({
        "instance": inst.name(),
        "mode": g.axiom4,
        "normal_only": normal,
        "count": list.len(),
    });
    if count_only {
        let _ = writeln!(text, "{}", list.len());
    } else {
        let rows: Vec<Value> = list
            .iter()
            .map(|s| json!({"set": s, "members": s.members(), "normal": is_normal(&w, s).holds()}))
            .collect();
        for s in &list {
            let mark = if is_normal(&w, s).holds() { "  normal" } else { "" };
            let _ = writeln!(text, "{}{mark}", render(inst, s));
        }
        let _ = writeln!(text, "{} Wm-subgroups", list.len());
        json["subgroups"] = Value::Array(rows);
    }
    Ok(Output::new("subgroups", json, text, false))
}

fn subgroup_verdict(w: &WmStructure, s: &SubSet) -> Result<(bool, Value)> {
    let check = is_wm_subgroup_direct(w, s)?;
    let failure = serde_json::to_value(check.witness()).expect("serializable");
    Ok((check.holds(), failure))
}

fn cosets(g: &Global, inst: &Instance, list: &str, side: Side) -> Result<Output> {
    let w = verified!(g, inst, "cosets");
    let s = input::subset(inst, list)?;
    let (is_sub, failure) = subgroup_verdict(&w, &s)?;
    let part = coset_partition(&w, &s, side);
    let k = relation_k(&w, &s);
    let mut text = format!("{} cosets of {} in {}\n", side_name(side), render(inst, &s), inst.name());
    if !is_sub {
        let _ = writeln!(text, "  warning: not a Wm-subgroup ({failure})");
    }
    for (i, b) in part.blocks.iter().enumerate() {
        let _ = writeln!(text, "  block {i}: {}", render(inst, b));
    }
    let _ = writeln!(text, "  partition: {}", part.is_partition);
    let _ = writeln!(text, "  relation K equivalence: {}", k.is_equivalence);
    if let Some(f) = &k.failure {
        let _ = writeln!(text, "  K fails: {}", serde_json::to_string(f).expect("serializable"));
    }
    if let Some(m) = k.classes_match_cosets {
        let _ = writeln!(text, "  K classes equal right cosets: {m}");
    }
    let json = json!({
        "instance": inst.name(),
        "mode": g.axiom4,
        "subgroup": s,
        "is_subgroup": is_sub,
        "subgroup_failure": failure,
        "side": side,
        "blocks": part.blocks,
        "is_partition": part.is_partition,
        "overlap_witness": part.overlap_witness,
        "uncovered_witness": part.uncovered_witness,
        "relation_k": {
            "is_equivalence": k.is_equivalence,
            "failure": k.failure,
            "classes": k.classes,
            "classes_match_cosets": k.classes_match_cosets,
        },
    });
    Ok(Output::new("cosets", json, text, !is_sub))
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn quotient_cmd(g: &Global, inst: &Instance, list: &str) -> Result<Output> {
    let w = verified!(g, inst, "quotient");
    let s = input::subset(inst, list)?;
    let (is_sub, _) = subgroup_verdict(&w, &s)?;
    let q = quotient(&w, &s);
    let mut text = format!("{}|{}\n", inst.name(), render(inst, &s));
    if !is_sub {
        let _ = writeln!(text, "  warning: not a Wm-subgroup");
    }
    for (i, b) in q.cosets.blocks.iter().enumerate() {
        let _ = writeln!(text, "  coset {i}: {}", render(inst, b));
    }
    let _ = writeln!(text, "  cosets partition: {}", q.cosets.is_partition);
    let _ = writeln!(text, "  well defined: {}", q.well_defined);
    if let Some(wit) = q.failure_witness {
        let _ = writeln!(text, "  representatives {} disagree", render_tuple(inst, &wit));
    }
    let verdict = match &q.verification {
        Some(Ok(_)) => "wm-group",
        Some(Err(_)) => "not-wm-group",
        None => "undefined",
    };
    if let Some(t) = &q.table {
        for row in t.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(text, "    {}", cells.join(" "));
        }
    }
    let _ = writeln!(text, "  quotient: {verdict}");
    let violations = match &q.verification {
        Some(Err(r)) => serde_json::to_value(&r.violations).expect("serializable"),
        _ => json!([]),
    };
    let json = json!({
        "instance": inst.name(),
        "mode": g.axiom4,
        "subgroup": s,
        "is_subgroup": is_sub,
        "cosets": q.cosets.blocks,
        "is_partition": q.cosets.is_partition,
        "well_defined": q.well_defined,
        "failure_witness": q.failure_witness,
        "table": q.table.as_ref().map(|t| t.rows().map(<[usize]>::to_vec).collect::<Vec<_>>()),
        "verdict": verdict,
        "violations": violations,
    });
    Ok(Output::new("quotient", json, text, !q.is_wm_group()))
}

fn homs(g: &Global, src: &Instance, tgt: &Instance, iso: bool, count_only: bool) -> Result<Output> {
    let a = verified!(g, src, "homs");
    let b = verified!(g, tgt, "homs");
    let cap = g.cap.unwrap_or(DEFAULT_HOM_CAP);
    let list = enumerate_homs_with_cap(&a, &b, iso, cap)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for f in &list {
        let k = kernel(f);
        let k_sub = !k.is_empty() && is_wm_subgroup_direct(&a, &k)?.holds();
        let k_normal = is_normal(&a, &k).holds();
        if !count_only {
            let _ = writeln!(
                text,
                "{}  kernel {} subgroup={k_sub} normal={k_normal}",
                f.render(names(src), names(tgt)),
                render(src, &k)
            );
        }
        rows.push(json!({
            "map": f.map(),
            "injective": f.is_injective(),
            "kernel": k,
            "kernel_is_subgroup": k_sub,
            "kernel_is_normal": k_normal,
        }));
    }
    if count_only {
        let _ = writeln!(text, "{}", list.len());
    } else {
        let _ = writeln!(text, "{} homomorphisms {} -> {}", list.len(), src.name(), tgt.name());
    }
    let mut json = json!({
        "source": src.name(),
        "target": tgt.name(),
        "mode": g.axiom4,
        "iso_only": iso,
        "count": list.len(),
    });
    if !count_only {
        json["homs"] = Value::Array(rows);
    }
    Ok(Output::new("homs", json, text, false))
}

fn enumerate(
    g: &Global,
    order: usize,
    count_only: bool,
    long_run: bool,
    diff: bool,
    export: Option<&std::path::Path>,
) -> Result<Output> {
    let mut opts = EnumerationOptions {
        long_run,
        workers: g.workers,
        ..Default::default()
    };
    if let Some(cap) = g.cap {
        opts.cap = cap;
    }
    let result = enumerate_wm_groups_with(order, g.axiom4, opts)?;
    if let Some(dir) = export {
        result.export(dir)?;
    }
    let mut text = String::new();
    let mut json = json!({
        "order": order,
        "mode": g.axiom4,
        "count": result.class_count(),
        "total_tables": result.total_tables,
        "stats": result.stats,
    });
    if count_only {
        let _ = writeln!(text, "{}", result.class_count());
    } else {
        let _ = writeln!(
            text,
            "order {order} ({}): {} classes from {} labeled tables",
            g.axiom4,
            result.class_count(),
            result.total_tables
        );
        let s = result.stats;
        let _ = writeln!(
            text,
            "  groups {}, commutative {}, commutative groups {}, neither {}",
            s.groups, s.commutative, s.both, s.neither
        );
        for (i, c) in result.classes.iter().enumerate() {
            let rows: Vec<String> = c
                .canonical
                .flat
                .chunks(order)
                .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(""))
                .collect();
            let _ = writeln!(
                text,
                "  {i:>3}  {}  group={} commutative={}",
                rows.join(" "),
                c.is_group,
                c.is_commutative
            );
        }
        json["classes"] = serde_json::to_value(&result.classes).expect("serializable");
    }
    if diff {
        let d = enumeration_diff(order, opts)?;
        let _ = writeln!(
            text,
            "weak-only classes: {} (weak {}, strong {})",
            d.entries.len(),
            d.weak_classes,
            d.strong_classes
        );
        for e in &d.entries {
            let _ = writeln!(text, "  {:?}  {}", e.canonical.flat, e.violation);
        }
        json["diff"] = serde_json::to_value(&d).expect("serializable");
    }
    Ok(Output::new("enumerate", json, text, false))
}

fn props_instances(g: &Global, args: &PropsArgs) -> Result<std::result::Result<Vec<WmStructure>, Output>> {
    let mut instances: Vec<Instance> = if args.inputs.is_empty() && args.enumerated.is_none() {
        catalog::positive_controls()
    } else {
        args.inputs.iter().map(|s| input::load(s)).collect::<Result<_>>()?
    };
    if let Some(max) = args.enumerated {
        let opts = EnumerationOptions {
            workers: g.workers,
            cap: g.cap.unwrap_or(EnumerationOptions::default().cap),
            ..Default::default()
        };
        for n in 1..=max {
            for t in enumerate_wm_groups_with(n, g.axiom4, opts)?.representatives() {
                instances.push(Instance::new(t, "enumerate"));
            }
        }
    }
    let mut out = Vec::new();
    for inst in &instances {
        match structure(g, inst, "props") {
            Ok(w) => out.push(w),
            Err(o) => return Ok(Err(o)),
        }
    }
    Ok(Ok(out))
}

fn props(g: &Global, args: &PropsArgs) -> Result<Output> {
    let instances = match props_instances(g, args)? {
        Ok(v) => v,
        Err(out) => return Ok(out),
    };
    let mut check = CheckOptions {
        semantics: g.semantics,
        policy: policy(g),
        search: search(g),
        ..Default::default()
    };
    if let Some(cap) = g.cap {
        check.hom_cap = cap;
    }
    let opts = AuditOptions {
        check,
        ids: (!args.ids.is_empty()).then(|| args.ids.clone()),
        workers: g.workers,
        catalog_rows: true,
    };
    if args.kernels {
        let rows = kernel_matrix(&instances, &opts)?;
        let mut text = String::new();
        for r in &rows {
            let _ = writeln!(
                text,
                "{} -> {} {:?}  kernel {} subgroup={} normal={}",
                r.source, r.target, r.map, r.kernel, r.is_subgroup, r.is_normal
            );
        }
        let _ = writeln!(text, "{} homomorphisms", rows.len());
        let failing = rows.iter().any(|r| !(r.is_subgroup && r.is_normal));
        let json = json!({"mode": g.axiom4, "kernels": rows});
        return Ok(Output::new("kernels", json, text, args.strict && failing));
    }
    let report = if args.subgroup.is_some() || args.target.is_some() {
        single_checks(g, args, &instances, &opts)?
    } else {
        audit(&instances, &opts)?
    };
    let failing = report.any_fails();
    let text = report.render_matrix();
    let json = serde_json::to_value(&report).expect("serializable");
    Ok(Output::new("props", json, text, args.strict && failing))
}

fn single_checks(
    g: &Global,
    args: &PropsArgs,
    instances: &[WmStructure],
    opts: &AuditOptions,
) -> Result<AuditReport> {
    let [w] = instances else {
        return Err(WmError::Usage("--subgroup and --target need exactly one input".into()));
    };
    if args.ids.is_empty() {
        return Err(WmError::Usage("--subgroup and --target need --id".into()));
    }
    let inst = input::load(&args.inputs[0])?;
    let target = match &args.target {
        Some(t) => {
            let t = input::load(t)?;
            match structure(g, &t, "props") {
                Ok(s) => Some(s),
                Err(_) => return Err(WmError::Usage(format!("target {} is not a Wm-group", t.name()))),
            }
        }
        None => None,
    };
    let subgroup = args.subgroup.as_deref().map(|l| input::subset(&inst, l)).transpose()?;
    let mut cells = Vec::new();
    for &id in &args.ids {
        let binding = match (subgroup, &target) {
            (Some(s), _) => Some(Binding::Subgroup(s)),
            (None, Some(t)) => Some(Binding::Target(t)),
            (None, None) => None,
        };
        cells.push(check_proposition(id, w, binding, opts.check)?);
    }
    Ok(AuditReport {
        mode: g.axiom4,
        semantics: g.semantics,
        instances: vec![InstanceAudit {
            instance: w.name().to_string(),
            mode: w.mode(),
            cells,
        }],
        catalog: Vec::new(),
    })
}

fn catalog_cmd(action: &CatalogAction) -> Result<Output> {
    match action {
        CatalogAction::List => {
            let entries = [
                ("paper_z4", None),
                ("sym3", None),
                ("cyclic", Some("n")),
                ("abelian_product", Some("d1,d2,...")),
                ("neg_add", Some("n")),
                ("right_projection", Some("n")),
                ("involution_rows", Some("n[:pi0,pi1,...]")),
            ];
            let mut text = String::new();
            for (name, param) in entries {
                match param {
                    Some(p) => {
                        let _ = writeln!(text, "{name} --param {p}");
                    }
                    None => {
                        let _ = writeln!(text, "{name}");
                    }
                }
            }
            let json = json!({
                "builtins": entries
                    .iter()
                    .map(|(n, p)| json!({"name": n, "param": p}))
                    .collect::<Vec<_>>(),
            });
            Ok(Output::new("catalog", json, text, false))
        }
        CatalogAction::Emit { name, param } => {
            let inst = catalog::builtin(name, param.as_deref())?;
            let table = catalog::serialize(&inst);
            let json = json!({"name": inst.name(), "order": inst.table.order(), "wmtable": table});
            Ok(Output::new("catalog", json, table, false))
        }
    }
}
