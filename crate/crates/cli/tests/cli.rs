use std::process::{Command, Output};

use serde_json::Value;

fn wronski(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wronski")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = wronski(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn fullsets_p2_m2() {
    let v = json(&["fullsets", "--p", "2", "--m", "2"]);
    assert_eq!(v["schema"], "wronski/1");
    assert_eq!(v["command"], "fullsets");
    assert_eq!(v["count"], 3);
    let sets: Vec<Vec<Vec<u32>>> = serde_json::from_value(v["sets"].clone()).unwrap();
    assert_eq!(sets, vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![2, 0]], vec![vec![0, 1], vec![0, 2]]]);
}

#[test]
fn indep_identity_family() {
    let v = json(&["indep", "--p", "2", "1", "z1", "z2"]);
    assert_eq!(v["independent"], true);
    assert_eq!(v["witness"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(v["rank"], 3);
}

#[test]
fn indep_dependent_family() {
    let v = json(&["indep", "--p", "2", "z1+z2", "z1", "z2"]);
    assert_eq!(v["independent"], false);
    assert!(v["witness"].is_null());
    assert_eq!(v["rank"], 2);
}

#[test]
fn wronskian_text_output() {
    let out = wronski(&["wronskian", "--set", "[[1],[2]]", "1", "z1", "z2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1");
}

#[test]
fn geometric_negative_has_counterexample() {
    let v = json(&["geometric", "--set", "[[1],[1,2]]", "--p", "2", "--mode", "randomized", "--seed", "7"]);
    assert_eq!(v["geometric"], false);
    assert_eq!(v["seed"], 7);
    assert!(v["counterexample"].is_object());
}

#[test]
fn geometric_full_set_exact() {
    let v = json(&["geometric", "--set", "[[1],[2],[1,2]]"]);
    assert_eq!(v["geometric"], true);
    assert_eq!(v["mode"], "exact");
}

#[test]
fn geometric_combination_input() {
    let c = r#"{"m":2,"p":1,"terms":[{"coeff":"1/2","set":[[1],[2]]}]}"#;
    let v = json(&["geometric", "--combination", c]);
    assert_eq!(v["geometric"], true);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["certify", "--p", "2", "--m", "2", "--samples", "10", "--seed", "3", "--format", "json"];
    let a = wronski(&args);
    let b = wronski(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_carry_default_seed() {
    let v = json(&["certify", "--p", "1", "--m", "2", "--samples", "5"]);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn reduce_staircase() {
    let v = json(&["reduce", "--p", "1", "1", "1+z1", "1+z1+z1^2"]);
    assert_eq!(v["ts"], serde_json::json!(["1", "z1", "z1^2"]));
    assert_eq!(v["verified"], true);
}

#[test]
fn vandermonde_key_identity() {
    let v = json(&["vandermonde", "--set", "[[1],[2],[1,1]]", "--check", "key", "--alphas", "[[0,0],[1,0],[0,1],[2,0]]"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["vandermonde"], v["wronskian_at_one"]);
}

#[test]
fn vandermonde_rational_columns() {
    let v = json(&["vandermonde", "--set", "[[1]]", "--cols", r#"[["1/2"],[3]]"#]);
    assert_eq!(v["value"], "5/2");
}

#[test]
fn fermat_threshold() {
    let v = json(&["fermat", "--N", "3", "--p", "1", "--delta", "9", "--max-delta", "9"]);
    assert_eq!(v["threshold"], 8);
    assert_eq!(v["passed"], true);
    assert_eq!(v["degrees"]["least_qualifying_delta"], 9);
}

#[test]
fn asymptotics_fractions_as_strings() {
    let v = json(&["asymptotics", "--p", "1", "--n", "2"]);
    assert_eq!(v["density"], "3/4");
    assert_eq!(v["size"], "2");
}

#[test]
fn exit_codes() {
    assert_eq!(wronski(&["nosuch"]).status.code(), Some(2));
    let parse = wronski(&["wronskian", "--set", "[[1]]", "1+"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(parse.stdout.is_empty());
    assert!(!parse.stderr.is_empty());
    assert_eq!(wronski(&["fullsets", "--p", "3", "--m", "20", "--cap", "5"]).status.code(), Some(3));
    assert_eq!(wronski(&["geometric", "--set", "[[1],[1,2]]", "--budget", "1"]).status.code(), Some(3));
}
