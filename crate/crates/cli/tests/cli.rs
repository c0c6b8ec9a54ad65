//! The binary end to end: formats, exit codes, files, determinism and cache.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cohom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohom")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn cohomology_dims() {
    for (group, dims) in [
        ("builtin:sz8-sylow", vec![1, 3, 5, 9]),
        ("builtin:trivial", vec![1, 0, 0, 0]),
        ("builtin:C2", vec![1, 1, 1, 1]),
    ] {
        let v = json(&cohom(&["cohomology", "--group", group, "--modulus-exp", "1", "--max-degree", "4"]));
        let got: Vec<u64> = v["result"]["dims"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert_eq!(got, dims, "{group}");
    }
}

#[test]
fn cohomology_with_z4_coefficients() {
    let v = json(&cohom(&["cohomology", "--group", "builtin:C4", "--modulus-exp", "2", "--max-degree", "3"]));
    let degrees = v["result"]["degrees"].as_array().unwrap();
    assert_eq!(degrees[1]["invariant_factors"], serde_json::json!([4]));
}

#[test]
fn report_envelope() {
    let v = json(&cohom(&["cohomology", "--group", "builtin:C2"]));
    assert_eq!(v["tool"], "cohom");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["command"], "cohomology");
    assert_eq!(v["group"]["order"], 2);
    assert_eq!(v["group"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["config"]["max_degree"], 4);
}

#[test]
fn criterion_is_identical_across_thread_counts() {
    let a = cohom(&["criterion", "--group", "builtin:D8", "--threads", "1"]);
    let b = cohom(&["criterion", "--group", "builtin:D8", "--threads", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"]["criterion_b"], false);
    assert_eq!(v["result"]["criterion_a"], false);
}

#[test]
fn criterion_from_a_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.json");
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
    fs::write(&path, serde_json::json!({"order": 4, "table": table}).to_string()).unwrap();
    let v = json(&cohom(&["criterion", "--group", path.to_str().unwrap()]));
    assert_eq!(v["result"]["criterion_a"], false);
    assert_eq!(v["result"]["criterion_b"], false);
    let builtin = json(&cohom(&["criterion", "--group", "builtin:C4"]));
    assert_eq!(v["group"]["sha256"], builtin["group"]["sha256"]);
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"order": 2, "table": [[0, 1], [1, 1]]}"#).unwrap();
    let out = cohom(&["criterion", "--group", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a group"));
    assert_eq!(cohom(&["criterion", "--group", "builtin:C3"]).status.code(), Some(2));
    assert_eq!(cohom(&["cohomology", "--group", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(cohom(&["criterion", "--group", "builtin:C4", "--max-degree", "3"]).status.code(), Some(2));
    assert_eq!(cohom(&["bogus"]).status.code(), Some(2));
}

#[test]
fn phi_examples_and_budget() {
    for (group, lattice) in [("builtin:C2", "builtin:M"), ("builtin:V4", "builtin:M"), ("builtin:C2", "builtin:regular")] {
        let v = json(&cohom(&["phi", "--group", group, "--lattice", lattice]));
        assert_eq!(v["result"]["invariant_factors"], serde_json::json!([]), "{group} {lattice}");
    }
    let out = cohom(&["phi", "--group", "builtin:sz8-sylow", "--lattice", "builtin:M"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn phi_from_a_lattice_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.json");
    let lattice = serde_json::json!({
        "rank": 2,
        "generators": [{"element": 1, "matrix": [[0, 1], [1, 0]]}]
    });
    fs::write(&path, lattice.to_string()).unwrap();
    let v = json(&cohom(&["phi", "--group", "builtin:C2", "--lattice", path.to_str().unwrap()]));
    assert_eq!(v["result"]["lattice_rank"], 2);
    let r = &v["result"];
    assert_eq!(r["dim"], 0);
    assert_eq!(
        r["permutation_rank"].as_u64().unwrap(),
        r["lattice_rank"].as_u64().unwrap() + r["coflasque_rank"].as_u64().unwrap()
    );
    let bad = serde_json::json!({"rank": 1, "generators": [{"element": 1, "matrix": [[2]]}]});
    fs::write(&path, bad.to_string()).unwrap();
    let out = cohom(&["phi", "--group", "builtin:C2", "--lattice", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_info() {
    let v = json(&cohom(&["lattice-info", "--group", "builtin:sz8-sylow", "--lattice", "builtin:M"]));
    let r = &v["result"];
    assert_eq!(r["rank"], 3969);
    assert_eq!(r["torsion_free"], true);
    assert_eq!(r["regular_wedge"]["s1"], 7);
    assert_eq!(r["regular_wedge"]["s2"], 28);
    assert_eq!(r["regular_wedge"]["rank"], 2016);
    let v = json(&cohom(&["lattice-info", "--group", "builtin:C2", "--lattice", "builtin:sign"]));
    assert_eq!(v["result"]["h1"], serde_json::json!([2]));
    assert_eq!(v["result"]["is_permutation"], false);
}

#[test]
fn text_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = cohom(&["criterion", "--group", "builtin:sz8-sylow", "--output", "text", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("criterion (b): true"));
    assert!(text.contains("59 subgroup classes"));
}

#[test]
fn cache_reuse_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["criterion", "--group", "builtin:Q16", "--cache-dir", cache];
    let a = cohom(&args);
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
    let b = cohom(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, cohom(&["criterion", "--group", "builtin:Q16"]).stdout);
}
