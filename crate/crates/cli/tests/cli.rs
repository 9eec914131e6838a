use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tamari-cy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_temp(name: &str, v: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tamari-cy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn counts_noncrossing_trees() {
    let out = run(&["enumerate", "--kind", "nctrees", "--n", "3", "--count-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "12");
    let out = run(&["enumerate", "--kind", "intervals", "--n", "3", "--count-only"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "13");
}

#[test]
fn lists_trees_as_nested_json() {
    let out = run(&["enumerate", "--kind", "trees", "--n", "2"]);
    assert_eq!(stdout_json(&out), json!([[null, [null, null]], [[null, null], null]]));
}

#[test]
fn dual_of_sample_tree() {
    let input = write_temp(
        "sample4_psi.json",
        &json!({"n": 4, "edges": [[1, 5], [1, 4], [2, 4], [2, 3]]}),
    );
    let out = run(&["map", "--via", "dual", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        json!({"n": 4, "edges": [[1, 3], [1, 4], [2, 3], [4, 5]]})
    );
}

#[test]
fn psi_then_inverse() {
    let ip = json!({"n": 4, "relations": [[2, 1], [2, 3], [3, 1], [4, 1]]});
    let input = write_temp("ip.json", &ip);
    let out = run(&["map", "--via", "theta", "--input", input.to_str().unwrap()]);
    let theta = write_temp("theta.json", &stdout_json(&out));
    let back = run(&["map", "--via", "theta-inv", "--input", theta.to_str().unwrap()]);
    assert_eq!(stdout_json(&back), ip);
}

#[test]
fn coxeter_verification_passes() {
    let out = run(&["verify", "--check", "coxeter", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["campaign"], "coxeter");
    assert_eq!(report["failures"], json!([]));
}

#[test]
fn all_checks_at_small_size() {
    let out = run(&["verify", "--check", "all", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = stdout_json(&out);
    assert_eq!(reports.as_array().unwrap().len(), 5);
}

#[test]
fn combinatorial_serre_orbit() {
    let input = write_temp("empty2.json", &json!({"n": 2, "relations": []}));
    let out = run(&["serre", "--input", input.to_str().unwrap(), "--steps", "6"]);
    let v = stdout_json(&out);
    let shifts: Vec<i64> = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["shift"].as_i64().unwrap())
        .collect();
    assert_eq!(shifts, vec![0, 1, 0, 0, 1, 0]);
    assert_eq!(v["orbit_shift"], 2);
    assert_eq!(v["steps"][5]["ip"], json!({"n": 2, "relations": []}));
}

#[test]
fn homological_serre_on_generic_poset() {
    let module = json!({
        "poset": {
            "elements": ["0", "1", "2", "3", "4"],
            "covers": [["0", "1"], ["0", "2"], ["1", "3"], ["2", "3"], ["3", "4"]]
        },
        "module": {"kind": "projective", "at": "3"}
    });
    let input = write_temp("dyck.json", &module);
    let out = run(&[
        "serre",
        "--input",
        input.to_str().unwrap(),
        "--steps",
        "3",
        "--mode",
        "homological",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["halted"], true);
    let last = &v["steps"][2]["homology"];
    assert_eq!(last[0], json!({"degree": 1, "dimensions": {"0": 1}}));
    assert_eq!(last[1], json!({"degree": 2, "dimensions": {"3": 1}}));
}

#[test]
fn generic_coxeter_needs_period() {
    let poset = json!({"elements": ["a", "b"], "covers": [["a", "b"]]});
    let input = write_temp("chain.json", &poset);
    let path = input.to_str().unwrap();
    assert_eq!(
        run(&["verify", "--check", "coxeter", "--input", path]).status.code(),
        Some(2)
    );
    let out = run(&["verify", "--check", "coxeter", "--input", path, "--period", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--check", "coxeter", "--input", path, "--period", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn exports() {
    let out = run(&["export", "--what", "lattice", "--n", "3", "--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 5);
    let input = write_temp("hasse.json", &json!({"n": 3, "relations": [[1, 2], [1, 3], [2, 3]]}));
    let out = run(&["export", "--what", "hasse", "--input", input.to_str().unwrap()]);
    assert_eq!(stdout_json(&out), json!({"n": 3, "covers": [[1, 2], [2, 3]]}));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["enumerate", "--kind", "trees", "--n", "2", "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["enumerate", "--kind", "ips", "--n", "9"]).status.code(), Some(2));
    let bad = write_temp("bad.json", &json!({"n": 3, "edges": [[1, 3], [2, 4], [1, 2]]}));
    assert_eq!(
        run(&["map", "--via", "dual", "--input", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let out = run(&["map", "--via", "dual", "--input", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    // ψ refuses non-exceptional input
    let ip = write_temp("nonexc.json", &json!({"n": 3, "relations": [[2, 1], [2, 3]]}));
    assert_eq!(
        run(&["map", "--via", "psi", "--input", ip.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
