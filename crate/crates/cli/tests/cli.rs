use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn omdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omdyn")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    omdyn(args).status.code().expect("exit code")
}

fn report(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = omdyn(&full);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn evidence_exits_zero() {
    assert_eq!(code(&["classify", "--symbol", "translation:1", "--criteria", "necessary,mixing_bij"]), 0);
    assert_eq!(code(&["classify", "--symbol", "gauss_perturbed", "--criteria", "not_transitive"]), 0);
}

#[test]
fn witness_exits_two() {
    assert_eq!(code(&["classify", "--symbol", "tiled_3x", "--criteria", "mixing_bij"]), 2);
}

#[test]
fn violated_hypotheses_exit_three() {
    assert_eq!(code(&["classify", "--symbol", "translation:1", "--criteria", "not_transitive"]), 3);
    assert_eq!(code(&["hypvec", "--symbol", "tiled_3x"]), 3);
}

#[test]
fn short_horizon_is_inconclusive() {
    assert_eq!(
        code(&["classify", "--symbol", "sqrt_glide", "--criteria", "mixing_bij", "--a", "-2", "--nmax", "40"]),
        4
    );
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&["classify", "--symbol", "no_such_map"]), 64);
    assert_eq!(code(&["classify", "--symbol", "translation:1", "--criteria", "bogus"]), 64);
    assert_eq!(code(&["classify", "--symbol", "translation:1", "--weights", "gauss(-1)"]), 64);
    assert_eq!(code(&["classify", "--no-such-flag"]), 64);
    assert_eq!(code(&["frobnicate"]), 64);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let args = ["classify", "--symbol", "tiled_3x", "--criteria", "necessary,mixing_bij"];
    let strip = |mut v: Value| {
        v.as_object_mut().expect("envelope is an object").remove("timing_ms").expect("timing present");
        v
    };
    let a = strip(report(&args));
    let b = strip(report(&args));
    assert_eq!(a, b);
    assert_eq!(a["schema"], "omdyn-report/1");
    assert_eq!(a["config_hash"].as_str().map(str::len), Some(64));
}

#[test]
fn config_hash_tracks_the_resolved_config() {
    let a = report(&["classify", "--symbol", "translation:1", "--criteria", "necessary"]);
    let b = report(&["classify", "--symbol", "translation:1", "--criteria", "necessary"]);
    let c = report(&["classify", "--symbol", "translation:1", "--criteria", "necessary", "--nmax", "12"]);
    assert_eq!(a["config_hash"], b["config_hash"]);
    assert_ne!(a["config_hash"], c["config_hash"]);
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .expect("csv dir exists")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

#[test]
fn emit_csv_writes_tables() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().join("tables");
    let status = code(&[
        "classify",
        "--symbol",
        "tiled_3x",
        "--criteria",
        "mixing_bij",
        "--emit-csv",
        out.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(status, 2);
    let files = csv_files(&out);
    assert!(!files.is_empty());
    let first = std::fs::read_to_string(out.join(&files[0])).expect("readable");
    assert!(first.starts_with("n,value,log_value"));
    assert!(first.lines().count() > 10);
}

#[test]
fn config_file_is_layered_under_flags() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{ "symbol": "tiled_3x", "criteria": "necessary" }"#).expect("write config");
    let file = path.to_str().expect("utf-8 path");
    assert_eq!(code(&["--config", file, "classify"]), 0);
    assert_eq!(code(&["--config", file, "classify", "--criteria", "mixing_bij"]), 2);
    let r = report(&["--config", file, "classify", "--symbol", "translation:1"]);
    assert_eq!(r["symbol"]["label"], "translation:1");

    std::fs::write(&path, r#"{ "symbol": "tiled_3x", "unknown_key": 1 }"#).expect("write config");
    assert_eq!(code(&["--config", file, "classify"]), 64);
}

#[test]
fn hypvec_passes_alpha_and_beta_through() {
    let r = report(&["hypvec", "--symbol", "translation:1", "--alpha", "-3", "--beta", "2"]);
    assert_eq!(r["payload"]["exit_code"], 0);
    let schedule = &r["payload"]["schedule"];
    assert_eq!(schedule["alpha"], -3.0);
    assert_eq!(schedule["beta"], 2.0);
    assert_eq!(schedule["entries"][0]["k"], 0);
}

#[test]
fn examples_matrix_matches() {
    let r = report(&["examples"]);
    let rows = r["payload"]["rows"].as_array().expect("rows");
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|row| row["matches"] == true));
}

#[test]
fn iterate_prints_the_orbit() {
    let out = omdyn(&["iterate", "--symbol", "translation:1", "--x", "0.5", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.trim() == "3 3.5"), "{text}");
}
