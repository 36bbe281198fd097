use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn wm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wm"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("wm runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> (i32, Value, String) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = wm(&full);
    let raw = stdout(&out);
    let v = serde_json::from_str(&raw).unwrap_or_else(|e| panic!("{args:?}: {e}\n{raw}"));
    (code(&out), v, raw)
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(root().join("schema/wm-report.schema.json")).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft7)
        .compile(&doc)
        .expect("schema compiles")
}

const INVOCATIONS: &[&[&str]] = &[
    &["check", "tables/z4.wmtable"],
    &["check", "tables/s3.wmtable"],
    &["check", "neg_add:5", "--all-witnesses"],
    &["check", "paper_z4", "--axiom4", "weak"],
    &["info", "neg_add:4"],
    &["info", "tables/s3.wmtable"],
    &["subgroups", "neg_add:6"],
    &["subgroups", "neg_add:6", "--normal", "--count-only"],
    &["cosets", "neg_add:6", "--subgroup", "0,3"],
    &["cosets", "neg_add:6", "--subgroup", "0,2,4", "--side", "left"],
    &["cosets", "cyclic:4", "--subgroup", "1"],
    &["quotient", "cyclic:4", "--subgroup", "0,2"],
    &["quotient", "neg_add:6", "--subgroup", "0,3"],
    &["homs", "cyclic:4", "cyclic:2"],
    &["homs", "cyclic:3", "neg_add:3", "--iso", "--count-only"],
    &["enumerate", "--order", "3"],
    &["enumerate", "--order", "4", "--diff", "--count-only"],
    &["props", "neg_add:5", "cyclic:3"],
    &["props", "neg_add:5", "--all-witnesses", "--semantics", "solution"],
    &["props", "cyclic:4", "--id", "P2.17", "--subgroup", "0,2"],
    &["props", "paper_z4", "--id", "P2.27.2", "--target", "cyclic:2"],
    &["props", "--kernels", "cyclic:2", "neg_add:3"],
    &["catalog", "list"],
    &["catalog", "emit", "involution_rows", "--param", "4:1,0,3,2"],
];

#[test]
fn every_document_validates() {
    let schema = schema();
    for args in INVOCATIONS {
        let (_, v, _) = json(args);
        if let Err(errors) = schema.validate(&v) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{args:?} does not validate: {msgs:?}");
        };
    }
}

#[test]
fn schema_rejects_malformed_documents() {
    let schema = schema();
    let (_, mut v, _) = json(&["check", "tables/z4.wmtable"]);
    v["verdict"] = Value::String("maybe".into());
    assert!(!schema.is_valid(&v));
    assert!(!schema.is_valid(&serde_json::json!({"command": "nonesuch"})));
}

#[test]
fn json_is_byte_identical_across_runs_and_workers() {
    let cases: &[&[&str]] = &[
        &["enumerate", "--order", "4"],
        &["props"],
        &["props", "--kernels", "cyclic:4", "neg_add:4", "abelian_product:2,2", "right_projection:3"],
    ];
    for args in cases {
        let (_, _, first) = json(args);
        let (_, _, again) = json(args);
        assert_eq!(first, again, "{args:?} differs between runs");
        let mut one = args.to_vec();
        one.extend(["--workers", "1"]);
        let mut four = args.to_vec();
        four.extend(["--workers", "4"]);
        assert_eq!(json(&one).2, json(&four).2, "{args:?} differs between 1 and 4 workers");
        assert_eq!(first, json(&one).2);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&wm(&["check", "tables/z4.wmtable"])), 0);
    assert_eq!(code(&wm(&["check", "tables/s3.wmtable"])), 1);
    assert_eq!(code(&wm(&["check", "nonesuch"])), 2);
    assert_eq!(code(&wm(&["check", "cyclic:x"])), 2);
    assert_eq!(code(&wm(&["check", "tables/z4.wmtable", "--frobnicate"])), 2);
    assert_eq!(code(&wm(&["frobnicate"])), 2);
    assert_eq!(code(&wm(&["cosets", "cyclic:4", "--subgroup", "9"])), 2);
    assert_eq!(code(&wm(&["enumerate", "--order", "0"])), 2);
    assert_eq!(code(&wm(&["enumerate", "--order", "6"])), 3);
    assert_eq!(code(&wm(&["enumerate", "--order", "7", "--long-run"])), 3);
    assert_eq!(code(&wm(&["subgroups", "sym3"])), 1);
    assert_eq!(code(&wm(&["cosets", "cyclic:4", "--subgroup", "1"])), 1);
    assert_eq!(code(&wm(&["props", "neg_add:5"])), 0);
    assert_eq!(code(&wm(&["props", "neg_add:5", "--strict"])), 1);
    assert_eq!(code(&wm(&["props", "cyclic:4", "--id", "P2.7", "--strict"])), 0);
    assert_eq!(code(&wm(&["props", "neg_add:6", "--id", "P2.17", "--subgroup", "0,3", "--strict"])), 1);
}

#[test]
fn usage_errors_go_to_stderr() {
    let out = wm(&["check", "nonesuch", "--json"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonesuch"));
}

#[test]
fn order_two_count() {
    let out = wm(&["enumerate", "--order", "2", "--count-only"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "3\n");
}

#[test]
fn z4_and_s3() {
    let out = wm(&["check", "tables/z4.wmtable"]);
    assert!(stdout(&out).contains("Wm-group (strong)"), "{}", stdout(&out));

    let out = wm(&["check", "tables/s3.wmtable"]);
    let text = stdout(&out);
    assert!(text.contains("not a Wm-group"));
    assert!(text.contains("A1 witness"), "{text}");

    let (_, v, _) = json(&["check", "tables/s3.wmtable"]);
    assert_eq!(v["violations"][0]["axiom"], "A1");
    assert_eq!(v["is_group"], true);
}

#[test]
fn text_and_json_agree() {
    for n in 1..=4 {
        let n = n.to_string();
        let text = stdout(&wm(&["enumerate", "--order", &n, "--count-only"]));
        let (_, v, _) = json(&["enumerate", "--order", &n, "--count-only"]);
        assert_eq!(text.trim(), v["count"].to_string());
    }

    let text = stdout(&wm(&["subgroups", "neg_add:6", "--count-only"]));
    let (_, v, _) = json(&["subgroups", "neg_add:6"]);
    assert_eq!(text.trim(), v["count"].to_string());
    assert_eq!(v["subgroups"].as_array().unwrap().len().to_string(), text.trim());

    let text = stdout(&wm(&["homs", "cyclic:4", "cyclic:2", "--count-only"]));
    let (_, v, _) = json(&["homs", "cyclic:4", "cyclic:2"]);
    assert_eq!(text.trim(), v["count"].to_string());

    // the matrix marks every failing cell that the JSON lists
    let text = stdout(&wm(&["props", "neg_add:5", "cyclic:3"]));
    let (_, v, _) = json(&["props", "neg_add:5", "cyclic:3"]);
    for inst in v["instances"].as_array().unwrap() {
        for cell in inst["cells"].as_array().unwrap() {
            if cell["verdict"] == "fails" {
                let id = cell["id"].as_str().unwrap();
                let row = text
                    .lines()
                    .find(|l| l.split_whitespace().next() == Some(id))
                    .unwrap_or_else(|| panic!("no row for {id}"));
                assert!(row.contains('x'), "{id}: {row}");
                let line = format!("{id} on {}", inst["instance"].as_str().unwrap());
                assert!(text.contains(&line), "missing witness line {line}");
            }
        }
    }

    for args in [["check", "tables/z4.wmtable"], ["check", "tables/s3.wmtable"]] {
        let text = stdout(&wm(&args));
        let (_, v, _) = json(&args);
        let wm_group = v["verdict"] == "wm-group";
        assert_eq!(!text.contains("not a Wm-group"), wm_group);
    }
}

#[test]
fn emitted_tables_check_back() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["paper_z4", "cyclic:5", "neg_add:4", "involution_rows:3"] {
        let (_, v, _) = json(&{
            let (n, p) = name.split_once(':').map_or((name, None), |(a, b)| (a, Some(b)));
            let mut a = vec!["catalog", "emit", n];
            if let Some(p) = p {
                a.extend(["--param", p]);
            }
            a
        });
        let path = dir.path().join(format!("{}.wmtable", name.replace(':', "_")));
        std::fs::write(&path, v["wmtable"].as_str().unwrap()).unwrap();
        let out = wm(&["check", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}: {}", stdout(&out));
    }
}

#[test]
fn export_writes_one_table_per_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = wm(&["enumerate", "--order", "3", "--export", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let tables: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "wmtable"))
        .collect();
    assert_eq!(tables.len(), 5);
    assert!(dir.path().join("summary.json").exists());
    for t in tables {
        assert_eq!(code(&wm(&["check", t.path().to_str().unwrap()])), 0);
    }
}

#[test]
fn neg_add_six_cosets() {
    let (_, v, _) = json(&["cosets", "neg_add:6", "--subgroup", "0,3"]);
    assert_eq!(v["relation_k"]["failure"]["property"], "reflexive");
    let (_, v, _) = json(&["cosets", "neg_add:6", "--subgroup", "0,2,4"]);
    assert_eq!(v["relation_k"]["is_equivalence"], true);
    assert_eq!(v["relation_k"]["classes_match_cosets"], true);
}

#[test]
fn quotient_of_cyclic_four() {
    let (c, v, _) = json(&["quotient", "cyclic:4", "--subgroup", "0,2"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "wm-group");
    assert_eq!(v["table"].as_array().unwrap().len(), 2);
}
