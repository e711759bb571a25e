use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn starlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starlab"))
        .args(args)
        .env_remove("STARLAB_REPORT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn trace_table_for_minus_one() {
    let cfg = scenario("z2-plane.toml");
    let out = starlab(&["trace-table", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["admissible_classes"], serde_json::json!([1]));
    let class = &v["data"]["classes"][1];
    assert_eq!(class["fixed_dim"], 0);
    assert_eq!(class["traces"][0], serde_json::json!(["1", "1/2"]));
}

#[test]
fn verify_traces_reports_dimensions() {
    for (file, dim, compact) in [("z2-plane.toml", 1, 2), ("z4-plane.toml", 3, 4), ("trivial-plane.toml", 0, 1)] {
        let cfg = scenario(file);
        let out = starlab(&["verify-traces", "--config", cfg.to_str().unwrap(), "--samples", "4"]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        let v = json(&out);
        assert_eq!(v["data"]["trace_space"]["dimension"], dim, "{file}");
        assert_eq!(v["data"]["trace_space"]["compact_support_prediction"], compact, "{file}");
    }
}

#[test]
fn poisson_constant_is_two() {
    let out = starlab(&["poisson-check", "--samples", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["compatibility"]["fitted"], "2");
}

#[test]
fn groupoid_tables_file() {
    let tables = scenario("pair-plus-z2.json");
    let out = starlab(&["groupoid-hh", "--tables", tables.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["groupoid"]["hh_convolution"], serde_json::json!([3, 0]));
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn hochschild_with_action() {
    let out = starlab(&["hochschild", "--algebra", "group-algebra z2", "--action", "group=z2 set=2 perm=(0 1)", "--k-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["hh"], serde_json::json!([2, 0, 0]));
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "invariant-cohomology"));
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[group]\norder = \"four\"\n").unwrap();
    assert_eq!(starlab(&["trace-table", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(starlab(&["trace-table"]).status.code(), Some(2));
    assert_eq!(starlab(&["poisson-check", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(starlab(&["hochschild", "--algebra", "tensor 2"]).status.code(), Some(2));
    assert_eq!(starlab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(starlab(&["star-check", "--json", "--text"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = starlab(&["star-check", "--seed", "11", "--samples", "5"]);
    let b = starlab(&["star-check", "--seed", "11", "--samples", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_dir_receives_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_starlab"))
        .args(["operation-identity", "--algebra", "truncated 1 2", "--samples", "2", "--text"])
        .env("STARLAB_REPORT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.path().join("operation-identity.txt")).unwrap();
    assert_eq!(written.as_bytes(), out.stdout.as_slice());
}
