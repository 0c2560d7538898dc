use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tpplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpplab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Runs with `--json` and returns the exit code and the parsed envelope.
fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = tpplab(&all);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    for key in ["tool_version", "command", "params", "results"] {
        assert!(v.get(key).is_some(), "envelope lacks {key}");
    }
    (code(&out), v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn group_info_reports_order_and_degrees() {
    let (c, v) = json(&["group", "info", "sym(3)"]);
    assert_eq!(c, 0);
    let r = &v["results"][0];
    assert_eq!(r["order"], "6");
    let degrees: Vec<(u64, u64)> = r["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["degree"].as_u64().unwrap(), d["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(degrees, vec![(1, 2), (2, 1)]);

    let (_, v) = json(&["group", "info", "cyc(41)^3"]);
    assert_eq!(v["results"][0]["order"], "68921");

    let (_, v) = json(&["group", "info", "cyc(2) wr sym(3)"]);
    assert_eq!(v["results"][0]["order"], "48");
    assert!(v["results"][0]["degrees"].is_null());
}

#[test]
fn invalid_spec_is_an_input_error_with_position() {
    let out = tpplab(&["group", "info", "sym(3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
}

#[test]
fn axis_family_round_trips_through_stpp_check() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("axis.json");
    assert_eq!(code(&tpplab(&["triple", "axis", "--n", "5", "--out", path_str(&file)])), 0);
    let (c, v) = json(&["tpp", "stpp", path_str(&file)]);
    assert_eq!(c, 0);
    assert_eq!(v["results"][0]["stpp"], true);

    // the envelope itself is also accepted as input
    let env = dir.path().join("env.json");
    fs::write(&env, tpplab(&["--json", "triple", "axis", "--n", "5"]).stdout).unwrap();
    assert_eq!(code(&tpplab(&["tpp", "check", path_str(&env)])), 0);
}

#[test]
fn failing_triple_reports_a_witness() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, r#"{"group":"cyc(3)","S":["c:0","c:1"],"T":["c:0","c:1"],"U":["c:0","c:1"]}"#).unwrap();
    let (c, v) = json(&["tpp", "check", path_str(&file)]);
    assert_eq!(c, 1);
    let r = &v["results"][0];
    assert_eq!(r["tpp"], false);
    let w: Vec<&str> = r["witness"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    let sum: u32 = w.iter().map(|s| s.trim_start_matches("c:").parse::<u32>().unwrap()).sum();
    assert_eq!(sum % 3, 0);
    assert!(w.iter().any(|s| *s != "c:0"));
}

#[test]
fn malformed_element_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("mal.json");
    fs::write(&file, r#"{"group":"cyc(3)","S":["c:x"],"T":["c:0"],"U":["c:0"]}"#).unwrap();
    assert_eq!(code(&tpplab(&["tpp", "check", path_str(&file)])), 2);
    assert_eq!(code(&tpplab(&["tpp", "check", "/nonexistent/triple.json"])), 2);
}

fn write_operands(dir: &Path) -> (String, String) {
    let a = dir.join("a.csv");
    let b = dir.join("b.json");
    fs::write(&a, "1,2,3\n4,5,6\n7,8,9\n").unwrap();
    fs::write(&b, "[[1,0,2],[0,1,0],[3,0,1]]").unwrap();
    (path_str(&a).to_string(), path_str(&b).to_string())
}

fn single_triple(dir: &Path, n: u32) -> String {
    let file = dir.join("one.json");
    let (_, v) = json(&["triple", "axis", "--n", &n.to_string()]);
    let fam = &v["results"][0];
    let t = &fam["triples"][0];
    let doc = serde_json::json!({"group": fam["group"], "S": t["S"], "T": t["T"], "U": t["U"]});
    fs::write(&file, doc.to_string()).unwrap();
    path_str(&file).to_string()
}

#[test]
fn matmul_matches_schoolbook() {
    let dir = TempDir::new().unwrap();
    let (a, b) = write_operands(dir.path());
    let triple = single_triple(dir.path(), 4);
    let out = dir.path().join("c.csv");
    let (c, v) = json(&["matmul", "--triple", &triple, "--a", &a, "--b", &b, "--out", path_str(&out)]);
    assert_eq!(c, 0);
    assert_eq!(v["results"][0]["verified"], true);
    assert_eq!(fs::read_to_string(&out).unwrap(), "10,2,5\n22,5,14\n34,8,23\n");

    let (c, v) = json(&["matmul", "--triple", &triple, "--a", &a, "--b", &b, "--mode", "float", "--path", "dft"]);
    assert_eq!(c, 0);
    assert!(v["results"][0]["max_abs_error"].as_f64().unwrap() < 1e-9);
}

#[test]
fn simultaneous_matmul_over_a_family() {
    let dir = TempDir::new().unwrap();
    let (a, b) = write_operands(dir.path());
    let fam = dir.path().join("fam.json");
    tpplab(&["triple", "axis", "--n", "4", "--out", path_str(&fam)]);
    let (c, v) = json(&["matmul", "--triple", path_str(&fam), "--a", &a, "--a", &b, "--b", &b, "--b", &a]);
    assert_eq!(c, 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
    assert_eq!(v["results"][0]["C"], serde_json::json!([[10, 2, 5], [22, 5, 14], [34, 8, 23]]));
}

#[test]
fn matmul_input_errors() {
    let dir = TempDir::new().unwrap();
    let (a, b) = write_operands(dir.path());
    let triple = single_triple(dir.path(), 3);
    // a 2x2x2 triple cannot hold 3x3 operands
    assert_eq!(code(&tpplab(&["matmul", "--triple", &triple, "--a", &a, "--b", &b])), 2);
    let triple = single_triple(dir.path(), 4);
    assert_eq!(code(&tpplab(&["matmul", "--triple", &triple, "--a", &a, "--b", &b, "--path", "dft"])), 2);
    assert_eq!(code(&tpplab(&["matmul", "--triple", &triple, "--a", &a, "--b", &b, "--cap", "10"])), 3);
}

#[test]
fn cap_exceeded_exit_code() {
    assert_eq!(code(&tpplab(&["triple", "triangle", "--n", "4", "--cap", "100"])), 3);
}

#[test]
fn bounds_minimize_finds_the_reference_minimum() {
    let (c, v) = json(&["bounds", "minimize", "--formula", "cyc3-r2", "--range", "3..100"]);
    assert_eq!(c, 0);
    let r = &v["results"][0];
    assert_eq!(r["n"], 16);
    assert!((r["value"].as_f64().unwrap() - 2.81553).abs() < 1e-4);

    let (_, v) = json(&["bounds", "minimize", "--formula", "wreath2", "--range", "3..200", "--k", "1"]);
    assert_eq!(v["results"][0]["n"], 41);
    assert_eq!(code(&tpplab(&["bounds", "minimize", "--formula", "nope", "--range", "3..10"])), 2);
    assert_eq!(code(&tpplab(&["bounds", "minimize", "--formula", "cyc3-r2", "--range", "9..3"])), 2);
}

#[test]
fn bounds_chapter6_headline_rows() {
    let (c, v) = json(&["bounds", "chapter6"]);
    assert_eq!(c, 0);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let values: Vec<f64> = rows.iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert!((values[0] - 2.92613).abs() < 1e-5);
    assert!((values[1] - 2.81554).abs() < 1e-5);
    assert!(values[2] < 2.82);
    let (_, all) = json(&["bounds", "chapter6", "--all"]);
    assert!(all["results"].as_array().unwrap().len() > 3);
}

#[test]
fn bounds_table_triangle_alpha() {
    let (c, v) = json(&["bounds", "table", "--triangle-alpha", "2..10"]);
    assert_eq!(c, 0);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!((rows[0]["leading"].as_f64().unwrap() - 3.88539).abs() < 5e-6);
    assert!((rows[8]["leading"].as_f64().unwrap() - 2.56756).abs() < 5e-6);
}

#[test]
fn search_is_exhaustive_on_cyc2_and_repeatable() {
    let (c, v) = json(&["search", "--group", "cyc(2)", "--budget", "100"]);
    assert_eq!(c, 0);
    let t = &v["results"][0]["triple"]["tensor"];
    assert_eq!((t["n"].as_u64(), t["m"].as_u64(), t["p"].as_u64()), (Some(2), Some(1), Some(1)));

    let args = ["--json", "--seed", "7", "search", "--group", "sym(4)", "--budget", "300"];
    assert_eq!(tpplab(&args).stdout, tpplab(&args).stdout);
    assert_eq!(code(&tpplab(&["search", "--group", "cyc(2)", "--budget", "0"])), 2);
}

#[test]
fn global_settings_are_validated() {
    assert_eq!(code(&tpplab(&["--tolerance", "0", "bounds", "chapter6"])), 2);
    assert_eq!(code(&tpplab(&["--cap", "0", "bounds", "chapter6"])), 2);
    let bad = Command::new(env!("CARGO_BIN_EXE_tpplab"))
        .args(["group", "info", "cyc(2)"])
        .env("TPPLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
    let ok = Command::new(env!("CARGO_BIN_EXE_tpplab"))
        .args(["group", "info", "cyc(2)"])
        .env("TPPLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&ok), 0);
}
