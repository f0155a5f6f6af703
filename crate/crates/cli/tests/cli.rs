use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jbundle"))
        .args(args)
        .env_remove("JB_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn weyl_bundle_splitting() {
    let out = run(&["analyze", "--group", "u_sl2", "--p", "3", "--builtin", "weyl:4", "--op", "bundle", "--j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["splitting"], serde_json::json!([-4, 0]));
    assert_eq!(v["provenance"]["field"]["p"], 3);
}

#[test]
fn zigzag_jordan_type_at_point() {
    let out = run(&["analyze", "--group", "ga1xga1", "--p", "3", "--builtin", "zigzag:2", "--op", "jtype", "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["jordan_type"], "2[2]+[1]");
}

#[test]
fn trivial_module_has_constant_rank_zero() {
    let out = run(&["analyze", "--group", "ga2", "--p", "3", "--builtin", "trivial:1", "--op", "constant-rank", "--j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["verdict"]["kind"], "constant");
    assert_eq!(v["result"]["verdict"]["rank"], 0);
}

#[test]
fn failed_constancy_assertion_exits_with_two() {
    let args = ["analyze", "--group", "sl2_2", "--p", "3", "--builtin", "natural", "--op", "constant-rank", "--assert-constant"];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["result"]["verdict"]["kind"], "non-constant");
    // Without the assertion the same computation is a success.
    assert_eq!(run(&args[..args.len() - 1]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_with_one_and_a_code() {
    let out = run(&["analyze", "--group", "nope", "--p", "3", "--builtin", "trivial", "--op", "jtype"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_PARSE"));
    let out = run(&["analyze", "--group", "ga2", "--p", "4", "--builtin", "trivial", "--op", "jtype"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_NOT_PRIME"));
    let out = run(&["analyze", "--group", "ga1xga1", "--p", "3", "--builtin", "zigzag:1", "--op", "jtype", "--point", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["analyze", "--group", "ga2", "--p", "3", "--input", "/nonexistent.json", "--op", "jtype"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_IO"));
}

#[test]
fn module_files_round_trip() {
    let dir = env!("CARGO_TARGET_TMPDIR");
    let path = format!("{dir}/duals.json");
    let module = r#"{"algebra":{"family":"ga2","p":3},"dim":3,
        "action":{"u0":[[0,0,0],[1,0,0],[0,0,0]],"u1":[[0,0,0],[0,0,0],[1,0,0]]}}"#;
    std::fs::write(&path, module).unwrap();
    let out = run(&["analyze", "--input", &path, "--op", "sections"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["result"]["dim"], 2);
    std::fs::write(&path, r#"{"algebra":{"family":"ga2","p":3},"dim":2,"action":{"u0":[[0,1],[0,0]]}}"#).unwrap();
    let out = run(&["analyze", "--input", &path, "--op", "sections"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic_under_a_seed() {
    let args = ["analyze", "--group", "u_sl2", "--p", "3", "--builtin", "pim:0", "--op", "bundle", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_jbundle"))
        .args(&args[..args.len() - 2])
        .env("JB_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(json_of(&c)["provenance"]["seed"], 11);
    assert_eq!(json_of(&c)["result"], json_of(&a)["result"]);
}

#[test]
fn reproduce_presets() {
    let out = run(&["reproduce", "zigzag", "--p", "3", "--n-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let md = String::from_utf8_lossy(&out.stdout);
    assert!(md.contains("| X_6 | O(-6) | O(-6) | PASS |"));
    assert!(md.contains("| Y_6 | O(6) | O(6) | PASS |"));
    let out = run(&["reproduce", "rho-kappa", "--p", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["passed"], true);
    let out = run(&["reproduce", "sl2-kernels", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).matches("PASS |").count(), 9);
    assert_eq!(run(&["reproduce", "unknown"]).status.code(), Some(1));
}

#[test]
fn markdown_subquotient() {
    let out = run(&[
        "analyze", "--group", "ga1xga1", "--p", "3", "--builtin", "zigzag-dual:3", "--op", "subquotient", "--image-power", "1",
        "--format", "md",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("≅ O(3)"));
}
