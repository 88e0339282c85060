use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["bowlab"];
    full.extend_from_slice(args);
    let code = bowlab_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(out.trim()).unwrap_or_else(|e| panic!("stdout not JSON ({e}): {out:?}, stderr {err}"));
    (code, v)
}

fn write_tmp(name: &str, v: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bowlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

#[test]
fn feasible_margins() {
    let (code, v) = run_json(&["feasible", "--rows", "1,1", "--cols", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["feasible"], json!(true));
    let (code, v) = run_json(&["feasible", "--rows", "2,0", "--cols", "2,0"]);
    assert_eq!(code, 1);
    assert_eq!(v["feasible"], json!(false));
}

#[test]
fn fixed_point_counts_and_stream() {
    let (code, v) = run_json(&["fixed-points", "--rows", "1,1", "--cols", "1,1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], json!(2));
    assert_eq!(v["matrices"].as_array().unwrap().len(), 2);
    let (_, v) = run_json(&["fixed-points", "--rows", "1,1,1", "--cols", "1,1,1"]);
    assert_eq!(v["count"], json!(6));
    let (code, out, _) = run(&["fixed-points", "--rows", "1,1", "--cols", "1,1", "--stream"]);
    assert_eq!(code, 0);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[2], json!({"count": 2}));
}

#[test]
fn fixed_point_guard() {
    let rows = "1,1,1,1,1,1,1";
    let (code, v) = run_json(&["fixed-points", "--rows", rows, "--cols", rows]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("--force"));
}

#[test]
fn normalize_sampled_and_from_file() {
    let (code, v) = run_json(&["normalize", "--mu", "2,4", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["matches_sample"], json!(true));
    assert_eq!(v["s_in_slice"], json!(true));

    // the returned s is itself a level-set matrix and normalizes to itself
    let p = write_tmp("s.json", &json!({"mu": [2, 4], "K": v["s"]}));
    let (code, w) = run_json(&["normalize", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(w["s"], v["s"]);

    let p = write_tmp("bad-k.json", &json!({"mu": [2], "K": [[0, 0], [0, 0]]}));
    let (code, w) = run_json(&["normalize", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(w["total_violations"].as_u64().unwrap() > 0);
}

#[test]
fn mvy_classical_case_and_inverse() {
    let a = write_tmp("a.json", &json!([[[-2, 1], [5]], [[7], [-3, 1]]]));
    let (code, v) = run_json(&["mvy", "--mu", "1,1", "--input", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["B"], json!([[2, 5], [7, 3]]));
    assert_eq!(v["jordan_ok"], json!(true));
    assert_eq!(v["c_consistent"], json!(true));

    let b = write_tmp("b.json", &json!({"mu": [1, 1], "B": v["B"]}));
    let (code, w) = run_json(&["mvy-inv", "--input", b.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(w["A"], json!([[[-2, 1], [5]], [[7], [-3, 1]]]));

    let (code, v) = run_json(&["mvy", "--mu", "1,1", "--input", a.to_str().unwrap(), "--depth", "-8"]);
    assert_eq!(code, 0);
    assert_eq!(v["residual_ok"], json!(true));
}

#[test]
fn mvy_rejects_non_members() {
    let a = write_tmp("not-w.json", &json!({"mu": [1, 1], "A": [[[0, 0, 1], [5]], [[7], [-3, 1]]]}));
    let (code, v) = run_json(&["mvy", "--input", a.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(v["error"].is_string());
    let b = write_tmp("not-s.json", &json!({"mu": [2], "B": [[1, 0], [0, 1]]}));
    let (code, _) = run_json(&["mvy-inv", "--input", b.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn jordan_check_reports_factors() {
    let p = write_tmp("jc.json", &json!({"A": [[[-2, 1], [5]], [[7], [-3, 1]]], "B": [[2, 5], [7, 3]]}));
    let (code, v) = run_json(&["jordan-check", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["lattice_factors"], v["slice_factors"]);
    let p = write_tmp("jc-bad.json", &json!({"A": [[[-2, 1], [5]], [[7], [-3, 1]]], "B": [[2, 5], [7, 4]]}));
    let (code, v) = run_json(&["jordan-check", "--input", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["jordan_ok"], json!(false));
}

#[test]
fn core_summary_and_tree() {
    let (code, v) = run_json(&["core", "--k", "1", "--c", "2,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["core"]["rank"], json!(1));
    assert_eq!(v["weights"]["v"], json!([2, 0]));
    assert_eq!(v["u_step"]["rank"], json!(0));

    let (code, v) = run_json(&["core", "--k", "1", "--c", "2,0", "--tree"]);
    assert_eq!(code, 0);
    assert_eq!(v["partial"], json!(false));
    assert_eq!(v["tree"]["children"][0]["step"], json!("U"));
    assert_eq!(v["tree"]["children"][0]["base"]["poincare"], json!(["1", "1"]));

    let (code, v) = run_json(&["core", "--k", "3", "--c", "2,2"]);
    assert_eq!(code, 1);
    assert_eq!(v["validation"]["valid"], json!(false));
}

#[test]
fn node_budget_env_var() {
    let out = Command::new(env!("CARGO_BIN_EXE_bowlab"))
        .args(["core", "--k", "2", "--c", "2,2,0,0", "--tree"])
        .env("BOWLAB_NODE_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["partial"], json!(true));
    assert_eq!(v["nodes"], json!(2));
}

#[test]
fn hilbert_example_presentation() {
    let pres = json!({
        "gens": ["x1", "x2", "x3", "v"],
        "rels": [
            [
                {"coef": 1, "mono": {"v": 2}},
                {"coef": -1, "mono": {"v": 1, "x1": 1}},
                {"coef": -1, "mono": {"v": 1, "x2": 1}},
                {"coef": 1, "mono": {"x1": 1, "x2": 1}}
            ],
            [{"coef": 1, "mono": {"v": 1, "x3": 1}}]
        ]
    });
    let p = write_tmp("example43.json", &pres);
    let (code, v) = run_json(&["hilbert", "--pres", p.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], json!(4));
    let (_, v) = run_json(&["hilbert", "--pres", p.to_str().unwrap(), "--degree", "4"]);
    assert_eq!(v["dimension"], json!(8));
}

#[test]
fn usage_errors_leave_stdout_empty() {
    for args in [
        vec!["feasible", "--rows", "1,x", "--cols", "1"],
        vec!["frobnicate"],
        vec!["core", "--k", "1", "--c", "2,0", "--bogus"],
        vec!["normalize", "--mu", "2,4"],
        vec!["mvy", "--input", "/nonexistent/a.json", "--mu", "1"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty());
    }
    let p = std::env::temp_dir().join(format!("bowlab-malformed-{}.json", std::process::id()));
    std::fs::write(&p, "{not json").unwrap();
    let (code, out, _) = run(&["hilbert", "--pres", p.to_str().unwrap(), "--degree", "2"]);
    assert_eq!((code, out.as_str()), (2, ""));
}

#[test]
fn binary_output_is_deterministic() {
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_bowlab"))
            .args(["normalize", "--mu", "3,2", "--seed", "11"])
            .output()
            .unwrap()
    };
    let (a, b) = (go(), go());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_passes() {
    let (code, v) = run_json(&["selftest", "--seed", "3", "--samples", "3"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["failed"], json!(0));
    assert!(v["passed"].as_u64().unwrap() > 0);
}
