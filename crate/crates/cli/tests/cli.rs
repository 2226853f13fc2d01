use std::path::PathBuf;
use std::process::{Command, Output};

use commsemi::CayleySemigroup;
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commsemi")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("commsemi-cli-{}-{name}", std::process::id()))
}

#[test]
fn complete_golden() {
    let rf2 = stdout(&["complete", &data("rf2.pres")]);
    assert!(rf2.contains("added: a b^2 -> a\n"));
    assert!(rf2.contains("elements: 7\n"));
    assert!(rf2.contains("normal forms: a, b, a^2, a b, b^2, a^2 b, b^3\n"));
    let rf1 = json(&["complete", &data("rf1.pres")]);
    assert_eq!(rf1["elements"], 11);
    assert_eq!(rf1["added"].as_array().unwrap().len(), 0);
    assert_eq!(json(&["complete", &data("rf3.pres")])["elements"], 40);
}

#[test]
fn complete_infinite() {
    let p = tmp("free.pres");
    std::fs::write(&p, "gens: a\n").unwrap();
    let out = stdout(&["complete", p.to_str().unwrap()]);
    assert!(out.contains("infinite"));
    assert_eq!(json(&["complete", p.to_str().unwrap()])["infinite"], true);
}

#[test]
fn structure_zn18() {
    let out = stdout(&["structure", "--zn", "18"]);
    assert!(out.contains("idempotents: {0, 1, 9, 10}\n"));
    assert_eq!(out.matches("type: C6").count(), 2);
    let v = json(&["structure", "--zn", "18"]);
    assert_eq!(v["report"]["components"].as_array().unwrap().len(), 4);
    let dot = stdout(&["structure", "--zn", "18", "--format", "dot"]);
    assert!(dot.starts_with("digraph semilattice {"));
}

#[test]
fn structure_from_presentation_and_table() {
    assert!(stdout(&["structure", &data("rf2.pres")]).contains("type: C6"));
    let path = tmp("z18.tbl");
    stdout(&["zn", "18", "--emit-table", path.to_str().unwrap()]);
    let table = std::fs::read_to_string(&path).unwrap();
    assert_eq!(CayleySemigroup::parse_table(&table).unwrap().size(), 18);
    assert_eq!(stdout(&["structure", path.to_str().unwrap()]), stdout(&["structure", "--zn", "18"]));
}

#[test]
fn exq_and_abelian() {
    assert_eq!(stdout(&["exq", "2", "10", "13", "6"]), "{9,12,15,18}\n");
    let ab = stdout(&["abelian", &data("rf6.mat")]);
    assert!(ab.contains("invariant factors: 2 4 12\n"));
    assert_eq!(json(&["abelian", &data("rf6.mat")])["diagonal"], serde_json::json!([2, 4, 12]));
}

#[test]
fn extend_table() {
    let v = json(&["extend", "3", "9", "13", "18"]);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes[4]["ordinary"], true);
    assert_eq!(classes[4]["strong"], false);
    assert_eq!(classes[6]["strong"], true);
    let path = tmp("ext.tbl");
    stdout(&["extend", "3", "9", "13", "18", "--k", "6", "--emit", path.to_str().unwrap()]);
    let s = CayleySemigroup::parse_table(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(s.size(), 11 + 30);
}

#[test]
fn frame_counts() {
    let out = stdout(&["frame", &data("diamond.frame")]);
    assert!(out.contains("ss = 36\n"));
    assert!(out.contains("IS = {6}\n"));
    assert!(stdout(&["frame", &data("diamond_built.frame")]).contains("strong semilattice: 22 elements"));
}

#[test]
fn rfsl_outputs() {
    let v = json(&["rfsl", &data("rf4.rel")]);
    let names: Vec<&str> = v["elements"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["a", "b", "c", "d", "ab", "ad", "cd"]);
    assert_eq!(v["closed_sets"], "8");
    let rf5 = json(&["rfsl", &data("rf5.rel")]);
    assert_eq!(rf5["elements"].as_array().unwrap().len(), 11);
    assert_eq!(rf5["closed_sets"], "12");
    let sigma2 = stdout(&["rfsl", &data("sigma2.imp")]);
    assert!(sigma2.contains("closed sets: 12\n"));
}

#[test]
fn zn_report() {
    let out = stdout(&["zn", "60"]);
    assert!(out.contains("crt basis: 45 40 36\n"));
    let v = json(&["zn", "504"]);
    let mut sizes: Vec<u64> = v["components"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, [12, 12, 24, 24, 72, 72, 144, 144]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["complete", "/definitely/missing"]).status.code(), Some(2));
    let p = tmp("bad.pres");
    std::fs::write(&p, "gens: a\nrel: a^2 a\n").unwrap();
    let out = run(&["complete", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["module"], "parse");
    assert_eq!(run(&["extend", "3", "9", "13", "18", "--k", "5"]).status.code(), Some(1));
    assert_eq!(run(&["zn", "100000"]).status.code(), Some(0));
    let t = tmp("big.tbl");
    assert_eq!(run(&["zn", "100000", "--emit-table", t.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["exq", "0", "1", "1", "1"]).status.code(), Some(2));
    assert_eq!(run(&["exq", "2", "10", "13", "6", "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["structure".to_string(), data("rf1.pres"), "--format".into(), "json".into()],
        vec!["zn".into(), "360".into()],
        vec!["rfsl".into(), data("rf5.rel"), "--format".into(), "dot".into()],
    ] {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&a).stdout, run(&a).stdout);
    }
}
