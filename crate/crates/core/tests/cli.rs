use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_formring"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("formring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const G: &str = "zmod:5:lambda=4/quad:3";

#[test]
fn validate_reports_form_parameters() {
    let out = run(&["validate", "zmod:4:lambda=3/quad:3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["lambda_min"], serde_json::json!([0, 2]));
}

#[test]
fn invalid_multiplier_is_reported() {
    let out = run(&["validate", "zmod:4:lambda=2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!((v["valid"].clone(), v["error"].clone()), (Value::Bool(false), Value::from("multiplier-invalid")));
}

#[test]
fn catalog_sweep_passes() {
    let out = run(&["validate", "--catalog"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(run(&["bogus"]).status.code(), Some(3));
    assert_eq!(run(&["suite", "nope", "--group", G]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_errors_are_json_on_stderr() {
    let out = run(&["suite", "split", "--group", "zmod:4:lambda=2/quad:3", "--cases", "1"]);
    assert_eq!(out.status.code(), Some(6));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "multiplier-invalid");
}

#[test]
fn suites_are_reproducible() {
    let strip = |mut v: Value| {
        let o = v.as_object_mut().unwrap();
        o.remove("elapsed_ms");
        o.remove("max_case_ms");
        v
    };
    let args = ["suite", "swan", "--group", G, "--seed", "5", "--cases", "6"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&args);
    assert_eq!(strip(json(&a)), strip(json(&b)));
    assert_eq!(json(&a)["pass"], 6);
}

#[test]
fn eval_then_membership_round_trip() {
    let w = scratch("w.json", r#"[{"family":"qe","i":1,"j":2,"payload":3},{"family":"qr","i":2,"j":1,"payload":1}]"#);
    let out = run(&["gens", "eval", "--group", G, "--word", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["member"], true);
    let m = scratch("m.json", &String::from_utf8(out.stdout).unwrap());
    let out = run(&["member", "check", "--group", G, "--matrix", m.to_str().unwrap(), "--oracle", "constructive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["elementary"], "yes");
}

#[test]
fn reduce_vector_verifies() {
    let v = scratch("v.json", "[2,0,1,0,0,0]");
    let out = run(&["reduce", "vector", "--group", G, "--vector", v.to_str().unwrap()]);
    let r = json(&out);
    if out.status.code() == Some(0) {
        assert_eq!(r["verified"], true);
    } else {
        // not isotropic: an error, not a bogus word
        assert!(out.status.code().unwrap() >= 3);
    }
    let e1 = scratch("e1.json", "[1,0,0,0,0,0]");
    let out = run(&["reduce", "vector", "--group", G, "--vector", e1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["target"], serde_json::json!([0, 0, 0, 0, 0, 1]));
}

#[test]
fn capped_bfs_is_unknown_and_gl_closures_agree() {
    let out = run(&["enum", "bfs", "--group", "zmod:3:lambda=2/quad:3", "--cap-bfs", "10"]);
    assert_eq!(out.status.code(), Some(2), "capped run is not complete");
    let out = run(&["enum", "gl", "--base", "zmod:2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["comparison"]["equal"], true);
}

#[test]
fn out_flag_writes_file() {
    let p = std::env::temp_dir().join(format!("formring-cli-out-{}.json", std::process::id()));
    let out = run(&["--out", p.to_str().unwrap(), "validate", G]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["valid"], true);
    let _ = std::fs::remove_file(p);
}
