use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn trilie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trilie"))
        .args(args)
        .env_remove("TRILIE_WORKERS")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = trilie(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), doc)
}

fn f(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn fundamental_identity_exit_codes() {
    let (code, doc) = run(&["check", "fi", &f("dim3.alg")]);
    assert_eq!(code, 0);
    assert_eq!(doc["outcome"], "pass");

    let (code, doc) = run(&["check", "fi", &f("broken.alg")]);
    assert_eq!(code, 1);
    assert_eq!(doc["outcome"], "fail");
    assert_eq!(doc["reports"][0]["violations"].as_array().unwrap().len(), 3);

    let (code, doc) = run(&["check", "fi", &f("nope.alg")]);
    assert_eq!(code, 2);
    assert_eq!(doc["outcome"], "error");
}

#[test]
fn missing_operator_is_an_input_error() {
    assert_eq!(run(&["trbo", "check", "missing.file"]).0, 2);
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.alg");
    std::fs::write(&p, r#"{"dim": 3, "brackets": {"1,1,2": ["1", "0", "0"]}}"#).unwrap();
    let (code, doc) = run(&["check", "fi", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("bad.alg"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(trilie(&["check"]).status.code(), Some(2));
    assert_eq!(trilie(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bad_worker_count_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_trilie"))
        .args(["check", "fi", &f("dim3.alg")])
        .env("TRILIE_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn checks_on_fixtures() {
    for (args, expected) in [
        (vec!["check", "derivation", "derivation.endo"], 0),
        (vec!["check", "derivation", "not-derivation.endo"], 1),
        (vec!["check", "rep", "dim3-ad.rep"], 0),
        (vec!["check", "rep", "line.rep"], 0),
        (vec!["check", "cocycle", "line.ctx"], 0),
        (vec!["check", "cocycle", "reynolds.ctx"], 0),
        (vec!["check", "nijenhuis", "nijenhuis.endo"], 0),
        (vec!["check", "nijenhuis", "not-nijenhuis.endo"], 1),
        (vec!["check", "reynolds", "reynolds.endo"], 0),
        (vec!["check", "reynolds", "not-reynolds.endo"], 1),
        (vec!["check", "ns", "nijenhuis.ns"], 0),
        (vec!["trbo", "check", "line.op"], 0),
        (vec!["trbo", "check", "inverse.op"], 0),
        (vec!["trbo", "check", "inverse-untwisted.op"], 1),
    ] {
        let path = f(args[2]);
        let (code, _) = run(&[args[0], args[1], &path]);
        assert_eq!(code, expected, "{args:?}");
    }
}

#[test]
fn reynolds_check_includes_bracket_report() {
    let (_, doc) = run(&["check", "reynolds", &f("reynolds.endo")]);
    let subjects: Vec<&str> = doc["reports"].as_array().unwrap().iter().map(|r| r["subject"].as_str().unwrap()).collect();
    assert_eq!(subjects, ["Reynolds identity", "Reynolds bracket"]);
}

#[test]
fn constructions_emit_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let emit = |name: &str| dir.path().join(name).display().to_string();

    let (code, doc) = run(&["construct", "semidirect", &f("line.ctx"), "--emit", &emit("sd.alg")]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["dim"], 4);
    assert_eq!(run(&["check", "fi", &emit("sd.alg")]).0, 0);

    for sub in ["ns-from-nijenhuis", "ns-from-reynolds"] {
        let src = if sub == "ns-from-nijenhuis" { "nijenhuis.endo" } else { "reynolds.endo" };
        let out = emit(&format!("{sub}.ns"));
        assert_eq!(run(&["construct", sub, &f(src), "--emit", &out]).0, 0, "{sub}");
        assert_eq!(run(&["check", "ns", &out]).0, 0, "{sub}");
    }

    let out = emit("ns-trbo.ns");
    assert_eq!(run(&["construct", "ns-from-trbo", &f("inverse.op"), "--emit", &out]).0, 0);
    assert_eq!(run(&["check", "ns", &out]).0, 0);

    let out = emit("deform.op");
    assert_eq!(run(&["construct", "deform-n", &f("nijenhuis.endo"), "--emit", &out]).0, 0);
    assert_eq!(run(&["trbo", "check", &out]).0, 0);

    let out = emit("rb.op");
    assert_eq!(run(&["construct", "trbo-from-reynolds", &f("reynolds.endo"), "--emit", &out]).0, 0);
    assert_eq!(run(&["trbo", "check", &out]).0, 0);

    let out = emit("bracket.alg");
    assert_eq!(run(&["construct", "reynolds-bracket", &f("reynolds.endo"), "--emit", &out]).0, 0);
    assert_eq!(run(&["check", "fi", &out]).0, 0);

    let out = emit("induced.alg");
    let (code, doc) = run(&["trbo", "induce", &f("reynolds.op"), "--emit", &out]);
    assert_eq!(code, 0);
    assert!(doc["varrho"].is_object());
    assert_eq!(run(&["check", "fi", &out]).0, 0);

    let out = emit("gauged.op");
    assert_eq!(run(&["trbo", "gauge", &f("line.gauge"), "--emit", &out]).0, 0);
    assert_eq!(run(&["trbo", "check", &out]).0, 0);
}

#[test]
fn non_nijenhuis_construction_exits_one() {
    let (code, doc) = run(&["construct", "deform-n", &f("not-nijenhuis.endo")]);
    assert_eq!(code, 1);
    assert!(doc["error"].as_str().unwrap().contains("Nijenhuis"));
}

#[test]
fn cohomology_rows() {
    let (code, doc) = run(&["cohomology", &f("dim3-ad.rep"), "--nmax", "3"]);
    assert_eq!(code, 0);
    let h: Vec<u64> = doc["rows"].as_array().unwrap().iter().map(|r| r["cohomology"].as_u64().unwrap()).collect();
    assert_eq!(h, [6, 3, 3]);

    let (code, doc) = run(&["trbo", "cohomology", &f("line.op"), "--nmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn deformations() {
    assert_eq!(run(&["trbo", "deform", "check", &f("reynolds.def")]).0, 0);
    let (code, doc) = run(&["trbo", "deform", "equiv", &f("reynolds.def")]);
    assert_eq!(code, 0);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 9);
    assert_eq!(run(&["trbo", "deform", "check", &f("reynolds-bad.def")]).0, 1);
    // no second direction to compare against
    assert_eq!(run(&["trbo", "deform", "equiv", &f("reynolds-bad.def")]).0, 2);
}

#[test]
fn family_reynolds_sampling_is_seeded() {
    let args = ["family", "omega", "reynolds", "--range", "-2..2", "--samples", "40", "--seed", "3"];
    let (code, a) = run(&args);
    assert_eq!(code, 0);
    let (_, b) = run(&args);
    assert_eq!(a["samples"], b["samples"]);
    assert_eq!(a["samples"].as_array().unwrap().len(), 40);

    let (code, doc) = run(&["family", "laurent", "reynolds", "--range", "-3..4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["reports"][0]["tuples_checked"], doc["valid_triples"]);

    assert_eq!(run(&["family", "laurent", "reynolds", "--range", "4..-3"]).0, 2);
}

#[test]
fn family_windows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.alg").display().to_string();
    let (code, doc) = run(&["family", "omega", "window", "--lo", "-2", "--hi", "0", "--a-lo", "2", "--a-hi", "4", "--emit", &out]);
    assert_eq!(code, 0);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 3);
    assert_eq!(doc["generators"].as_array().unwrap().len(), 9);
    assert!(PathBuf::from(&out).exists());

    // the weight -1 generator has no Reynolds scale, so only the identity is checked
    let (code, doc) = run(&["family", "laurent", "window", "--lo", "-3", "--hi", "3"]);
    assert_eq!(code, 0);
    assert!(doc["reynolds"].is_string());
}
