use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn geoext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoext")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("json on stdout")
}

#[test]
fn check_reports_properties() {
    let o = geoext(&["check", "FIX-L7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("semimodular: yes"));
    assert!(text.contains("geometric: no"));
    assert!(text.contains("join-irreducibles: 5"));

    let o = geoext(&["check", "FIX-FIG1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("lattice: no"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(geoext(&["check", "/nonexistent/lattice.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let redundant = dir.path().join("redundant.json");
    fs::write(&redundant, r#"{"n": 3, "covers": [[0, 1], [1, 2], [0, 2]]}"#).unwrap();
    let o = geoext(&["check", redundant.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(geoext(&["represent", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(geoext(&["check-M", "FIX-L7"]).status.code(), Some(2));
}

#[test]
fn represent_matches_fixture() {
    let o = geoext(&["represent", "FIX-P10"]);
    assert_eq!(o.status.code(), Some(0));
    let expected: Value = serde_json::from_str(include_str!("../../core/fixtures/s10.json")).unwrap();
    assert_eq!(json(&o), expected);
}

#[test]
fn scripted_enumeration_reaches_fam14() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("script.json");
    fs::write(&script, "[[1, 2, 4], [1, 5], [2, 5], [4, 5]]").unwrap();
    let o = geoext(&["enumerate", "FIX-S10", "--embedded", "FIX-T10", "--script", script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let expected: Value = serde_json::from_str(include_str!("../../core/fixtures/fam14.json")).unwrap();
    let mut got: Vec<Value> = v["family"]["sets"].as_array().unwrap().clone();
    let mut want: Vec<Value> = expected["sets"].as_array().unwrap().clone();
    got.sort_by_key(|x| x.to_string());
    want.sort_by_key(|x| x.to_string());
    assert_eq!(got, want);
    assert_eq!(v["trace"].as_array().unwrap().len(), 4);

    fs::write(&script, "[[1, 2, 3]]").unwrap();
    let o = geoext(&["enumerate", "FIX-S10", "--embedded", "FIX-T10", "--script", script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_lists_classes() {
    let o = geoext(&["enumerate", "FIX-S10", "--embedded", "FIX-T10", "--all", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let sizes: Vec<usize> =
        v["classes"].as_array().unwrap().iter().map(|c| c["sets"].as_array().unwrap().len()).collect();
    assert_eq!(sizes, vec![12, 15, 17]);
    assert_eq!(v["truncated"], Value::Bool(false));
    assert_eq!(geoext(&["enumerate", "FIX-S10", "--embedded", "FIX-T10", "--budget", "2"]).status.code(), Some(1));
}

#[test]
fn best_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("best.json");
    let dot = dir.path().join("best.dot");
    let o = geoext(&["best", "FIX-L7", "--json", out.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["size"], 12);
    assert_eq!(v[0]["atoms"], 5);
    assert!(fs::read_to_string(&dot).unwrap().contains("digraph \"best0\""));
    let o = geoext(&["oracle-best", "FIX-L7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["size"], 12);
    assert_eq!(json(&o)["depth"], 1);
}

#[test]
fn check_m_verdicts() {
    let o = geoext(&["check-M", "FIX-S10"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["holds"], Value::Bool(false));
    let o = geoext(&["check-m", "FIX-FAM16"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["holds"], Value::Bool(true));
}

#[test]
fn iso_and_dot() {
    let o = geoext(&["iso", "FIX-FIG2", "FIX-FIG3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
    assert_eq!(geoext(&["iso", "FIX-M3", "FIX-L5"]).status.code(), Some(1));
    let o = geoext(&["dot", "FIX-M3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("rankdir=BT"));
    assert_eq!(text.matches("->").count(), 6);
}

#[test]
fn forms_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = geoext(&["forms", "FIX-L5", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let forms = json(&o);
    assert_eq!(forms.as_array().unwrap().len(), 5);
    for (i, form) in forms.as_array().unwrap().iter().enumerate() {
        let path = dir.path().join(format!("form{i}.json"));
        fs::write(&path, form.to_string()).unwrap();
        let o = geoext(&["represent", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(json(&o)["universe"].as_u64().unwrap() >= 4);
    }
}
