use std::path::Path;
use std::process::{Command, Output};

fn steer3q(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steer3q"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn states(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../states")
        .join(name)
        .display()
        .to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn analyze_psi_abc_file() {
    let out = steer3q(&["analyze", "--input", &states("psi_abc.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["steering"]["graph_type"], "two-edge");
    assert!((doc["steering"]["i_local"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(doc["provenance"]["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(doc["classification"]["subtype"], "2-3");
}

#[test]
fn every_shipped_state_loads() {
    for entry in std::fs::read_dir(states("")).unwrap() {
        let path = entry.unwrap().path();
        let out = steer3q(&["analyze", "--input", path.to_str().unwrap(), "--format", "text"]);
        assert_eq!(out.status.code(), Some(0), "{}", path.display());
    }
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"format_version\": 1, \"kind\": ").unwrap();
    let out = steer3q(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn unnormalized_state_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unnorm.json");
    std::fs::write(
        &path,
        r#"{"format_version":1,"kind":"gsd_params","payload":{"lambda":[1,1,0,0,0],"phi":0}}"#,
    )
    .unwrap();
    let out = steer3q(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    let out = steer3q(&["analyze", "--input", "/nonexistent/state.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_2() {
    let out = steer3q(&["verify", "nope", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_rejects_density_input() {
    let out = steer3q(&["classify", "--input", &states("noisy_ghz.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn robustness_needs_two_steerable_pairs() {
    let out = steer3q(&["robustness", "--family", "ghz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn robustness_reports_both_figures() {
    let out = steer3q(&["robustness", "--input", &states("phi_star_v.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let v = &doc["visibility"];
    assert!((v["linear_closed_form"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((v["bisection"].as_f64().unwrap() - 1.25f64.sqrt().recip()).abs() < 1e-9);
    assert_eq!(doc["flagged"], true);
}

#[test]
fn refuted_claim_suite_exits_1() {
    let out = steer3q(&["verify", "two-pair-necessary", "--samples", "500", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.json");
    let out = steer3q(&["verify", "tradeoff", "--samples", "50", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["all_passed"], true);
}

#[test]
fn sweep_csv_has_one_row_per_grid_point() {
    let out = steer3q(&["sweep", "--family", "phi_q", "--range", "0.05..0.7", "--step", "0.01", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 67);
}

#[test]
fn csv_is_rejected_for_analyze() {
    let out = steer3q(&["analyze", "--family", "w", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loose.json");
    let a = 0.5f64.sqrt() * (1.0 + 1e-7);
    std::fs::write(
        &path,
        format!(r#"{{"format_version":1,"kind":"pure_amplitudes","payload":{{"amplitudes":[[{a},0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[{a},0]]}}}}"#),
    )
    .unwrap();
    assert_eq!(steer3q(&["analyze", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_steer3q"))
        .args(["analyze", "--input", path.to_str().unwrap()])
        .env("STEER3Q_TOLERANCE", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
