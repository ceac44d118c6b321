//! End-to-end behaviour of the `higgs` binary.

use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

fn higgs() -> Command {
    let mut c = Command::cargo_bin("higgs").expect("binary is built");
    c.env_remove("HIGGS_SEED");
    c
}

fn json_of(cmd: &mut Command) -> Value {
    let out = cmd.assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).expect("valid JSON")
}

#[test]
fn torsion_components_of_degree_three() {
    let v = json_of(higgs().args(["components", "list", "--class", "0,3"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v["seed"].is_u64());
}

#[test]
fn relation_check_prints_ok() {
    higgs()
        .args(["algebra", "verify", "--relation", "3", "--n", "1", "--l", "-1", "--floor", "-8"])
        .assert()
        .success()
        .stdout("OK\n");
}

#[test]
fn crystal_graph_to_dot_file_reaches_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    higgs()
        .args(["crystal", "graph", "--rank-max", "1", "--deg-min", "-2", "--deg-max", "0", "--floor", "-3", "--ops", "0,-1", "--out"])
        .arg(&path)
        .assert()
        .success();
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("// seed: "));
    assert!(dot.contains("digraph"));
    assert!(dot.contains("\"V=[0];L=[]\" -> \"V=[];L=[]\""), "{dot}");
}

#[test]
fn seed_comes_from_the_environment() {
    let v = json_of(higgs().env("HIGGS_SEED", "77").args(["crystal", "apply", "--component", "V=[0];L=[]", "--op", "f:0"]));
    assert_eq!(v["seed"], 77);
    assert_eq!(v["image"], "V=[];L=[]");
}

#[test]
fn output_is_deterministic_and_reparseable() {
    let args = ["semican", "torsion", "--d", "2", "--seed", "3"];
    let a = higgs().args(args).assert().success().get_output().stdout.clone();
    let b = higgs().args(args).assert().success().get_output().stdout.clone();
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    for entry in v["basis"].as_array().unwrap() {
        let f: higgs_core::WordCombination = serde_json::from_value(entry["element"].clone()).unwrap();
        assert_eq!(serde_json::to_value(&f).unwrap(), entry["element"]);
    }
}

#[test]
fn semicanonical_element_of_a_line_with_torsion() {
    let v = json_of(higgs().args(["semican", "element", "--component", "V=[-1];L=[1]", "--floor", "-1"]));
    let terms = v["element"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["c"], "1");
}

#[test]
fn evaluate_writes_counts_as_csv() {
    higgs()
        .args(["evaluate", "--word", "T1 T1", "--component", "V=[];L=[1,1]", "--format", "csv"])
        .assert()
        .success()
        .stdout(predicate::str::contains("q,count\n2,2\n"));
}

#[test]
fn usage_errors_exit_with_one() {
    higgs().arg("bogus").assert().code(1);
    higgs().args(["components", "list", "--class", "nonsense"]).assert().code(1);
}

#[test]
fn computation_errors_exit_with_two() {
    higgs()
        .args(["semican", "element", "--component", "V=[0,0];L=[]", "--floor", "-4"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("budget"));
}

#[test]
fn selftest_single_criterion() {
    let v = json_of(higgs().args(["selftest", "--only", "9"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["index"], 9);
}
