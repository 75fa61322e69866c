use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formaffine")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn classify_remark_function_gives_witness() {
    let out = run(&["classify", "--in", &data("remark36.json"), "--mode", "ext-int", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["is_member"], false);
    assert!(v.get("canonical").is_none());
    let w = &v["witness"];
    assert_eq!(w["t_power"], 2);
    assert_eq!(w["value"], "1");
    assert_eq!(w["a"]["coeffs"].as_array().unwrap().len(), 1);
    assert_eq!(w["b"]["coeffs"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_member_carries_canonical() {
    let out = run(&["classify", "--in", &data("linear.json"), "--mode", "ext", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["is_member"], true);
    assert_eq!(v["canonical"]["a"][0]["form"]["coeffs"][0]["value"], "1");
    assert_eq!(v["canonical"]["a"][1]["form"]["coeffs"][0]["value"], "1/3");
}

#[test]
fn classify_square_is_refuted() {
    let out = run(&["classify", "--in", &data("square.json"), "--mode", "ext"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ext one affine: no"), "{text}");
    assert!(text.contains("coefficient of t^2 = 1"), "{text}");
}

#[test]
fn extract_non_member_fails() {
    let out = run(&["extract", "--in", &data("square.json"), "--mode", "ext"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two() {
    let out = run(&["classify", "--in", &data("bad_index.json"), "--mode", "ext"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("terms[0].vars[0].index"), "{err}");
    assert!(err.contains("strictly increasing"), "{err}");

    let out = run(&["classify", "--in", &data("malformed.json"), "--mode", "ext"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("terms[0].coeff"));

    let out = run(&["classify", "--in", &data("missing.json"), "--mode", "ext"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["classify", "--in", &data("square.json"), "--mode", "ext-int"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--suite", "prop21"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--suite", "nope", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_prop21() {
    let out = run(&["verify", "--suite", "prop21", "--n", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["suite"], "prop21");
    assert!(v["cases_run"].as_u64().unwrap() > 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(String::from_utf8(out.stderr).unwrap().contains("wall time"));
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "--suite", "thm51", "--n", "3", "--k", "1", "--cases", "5", "--seed", "11", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn demo_middle_grade_counterexample() {
    let out = run(&["demo", "--name", "thm53-counterexample", "--n", "4", "--k", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["ext_one_affine"], true);
    assert_eq!(v["int_one_affine"], true);
    assert_eq!(v["degree"], 2);
    assert_eq!(v["affine"], false);

    let out = run(&["demo", "--name", "thm53-counterexample", "--n", "6", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_remark() {
    let out = run(&["demo", "--name", "remark36", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["verdict"]["is_member"], false);
    assert!(v["non_convexity"]["second_derivative"].as_str().unwrap().starts_with('-'));
}

#[test]
fn kernel_report() {
    let out = run(&["kernel", "--n", "4", "--k", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["basis"][0]["identity_holds"], true);
    assert_eq!(v["basis"][0]["h"]["coeffs"][0]["index"], serde_json::json!([2, 3, 4]));

    let out = run(&["kernel", "--n", "4", "--k", "3", "--json"]);
    assert_eq!(json_of(&out)["dimension"], 0);
}
