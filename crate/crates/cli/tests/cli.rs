use std::path::Path;
use std::process::{Command, Output};

use pseudoherm::io::{read_matrix, write_matrix};
use pseudoherm::models::pt2x2;
use pseudoherm::{c64, ComplexMatrix};
use serde_json::Value;
use std::f64::consts::PI;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_pseudoherm"))
        .args(args)
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn write(dir: &Path, name: &str, m: &ComplexMatrix) -> String {
    let p = dir.join(name);
    std::fs::write(&p, write_matrix(m)).unwrap();
    p.to_str().unwrap().to_owned()
}

fn sigma1() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| c64::new(if i == j { 0.0 } else { 1.0 }, 0.0))
}

#[test]
fn classify_sigma1_is_hermitian() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s1.json", &sigma1());
    let (code, r, _) = run(&["classify", &p]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["classification"]["kind"], "Hermitian");
    assert_eq!(r["spectrum"].as_array().unwrap().len(), 2);
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
    assert!(r["metric"].is_null());
}

#[test]
fn classify_broken_pt_emits_indefinite_metric() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "pt.json", &pt2x2(1.0, PI / 2.0, 0.5));
    let (code, r, _) = run(&["classify", &p, "--emit-metric"]);
    assert_eq!(code, 0);
    assert_eq!(r["classification"]["kind"], "PseudoHermitianOnly");
    assert_eq!(r["signature"], serde_json::json!([1, 1]));
    assert!(r["residuals"]["intertwining"].as_f64().unwrap() <= 1e-8);
    let metric = serde_json::to_string(&r["metric"]).unwrap();
    let eta = read_matrix(&metric).unwrap();
    assert!(eta.hermiticity_residual() < 1e-12);
}

#[test]
fn malformed_and_missing_input_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"dim\": 2,\n\"re\": [[0, 1]").unwrap();
    let (code, _, err) = run(&["classify", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");

    std::fs::write(&p, r#"{"dim": 3, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#).unwrap();
    assert_eq!(run(&["classify", p.to_str().unwrap()]).0, 2);
    assert_eq!(
        run(&["classify", dir.path().join("absent.json").to_str().unwrap()]).0,
        2
    );
}

#[test]
fn same_input_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "pt.json", &pt2x2(1.0, PI / 6.0, 1.0));
    let a = Command::new(env!("CARGO_BIN_EXE_pseudoherm"))
        .args(["metric", &p])
        .output()
        .unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_pseudoherm"))
        .args(["metric", &p])
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn metric_with_signs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "pt.json", &pt2x2(1.0, PI / 6.0, 1.0));
    let (code, r, _) = run(&["metric", &p]);
    assert_eq!(code, 0);
    assert_eq!(r["signature"], serde_json::json!([2, 0]));

    let (code, r, _) = run(&["metric", &p, "--signs", "1,-1"]);
    assert_eq!(code, 0);
    assert_eq!(r["signature"], serde_json::json!([1, 1]));
    assert!(r["residuals"]["intertwining"].as_f64().unwrap() <= 1e-8);

    assert_eq!(run(&["metric", &p, "--signs", "1"]).0, 2);
    assert_eq!(run(&["metric", &p, "--signs", "1,2"]).0, 2);
}

#[test]
fn hermitize_quasi_and_reject_broken() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "pt.json", &pt2x2(1.0, PI / 6.0, 1.0));
    let (code, r, _) = run(&["hermitize", &p]);
    assert_eq!(code, 0);
    assert!(r["residuals"]["hermitized_hermiticity"].as_f64().unwrap() <= 1e-8);
    let h = read_matrix(&serde_json::to_string(&r["outputs"]["h"]).unwrap()).unwrap();
    assert!(h.hermiticity_residual() <= 1e-8);

    let q = write(dir.path(), "broken.json", &pt2x2(1.0, PI / 2.0, 0.5));
    let (code, r, _) = run(&["hermitize", &q]);
    assert_eq!(code, 1);
    assert!(r["notes"].as_str().unwrap().contains("PseudoHermitianOnly"));
}

#[test]
fn symmetry_residual_is_small() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "pt.json", &pt2x2(1.0, PI / 2.0, 0.5));
    let (code, r, _) = run(&["symmetry", &p]);
    assert_eq!(code, 0);
    assert!(r["residuals"]["antilinear"].as_f64().unwrap() <= 1e-8);

    let not_pseudo = ComplexMatrix::diag(&[c64::new(1.0, 0.0), c64::new(0.0, 2.0)]);
    let q = write(dir.path(), "np.json", &not_pseudo);
    assert_eq!(run(&["symmetry", &q]).0, 1);
}

#[test]
fn kg_reports_sector_dimensions() {
    let (code, r, _) = run(&["kg", "--n", "16", "--length", "10", "--samples", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["outputs"]["kg"]["indefinite_physical_dim"], 16);
    assert_eq!(r["outputs"]["kg"]["pseudo_physical_dim"], 32);
    assert!(r["residuals"]["pd_drift"].as_f64().unwrap() <= 1e-10);
    assert!(r["residuals"]["kg_drift"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn kg_massless_is_input_error() {
    let (code, _, err) = run(&["kg", "--mass", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("grid"), "{err}");
}

#[test]
fn verify_ensembles() {
    let (code, r, _) = run(&["verify", "--ensemble", "quasi", "--count", "100"]);
    assert_eq!(code, 0);
    let suite = &r["outputs"]["suite"];
    for leg in [
        "quasi_classified",
        "quasi_positive_metric",
        "quasi_hermitized",
        "quasi_eta_hermitian",
    ] {
        assert_eq!(suite[leg]["pass"], 100, "{leg}");
    }

    let (code, r, _) = run(&[
        "verify",
        "--ensemble",
        "pseudo-nonquasi",
        "--count",
        "30",
        "--dims",
        "2,4,6",
    ]);
    assert_eq!(code, 0);
    let suite = &r["outputs"]["suite"];
    assert_eq!(suite["pseudo_metric"]["pass"], 30);
    assert_eq!(suite["no_positive_metric_violations"], 0);
    assert_eq!(suite["quasi_positive_metric"]["fail"], 30);

    let (code, r, _) = run(&["verify", "--ensemble", "defective", "--count", "12"]);
    assert_eq!(code, 0);
    assert_eq!(r["outputs"]["suite"]["skipped"], 12);
    assert!(r["notes"].as_str().unwrap().contains("12"));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(run(&["verify", "--dims", "1-3"]).0, 2);
    assert_eq!(run(&["verify", "--ensemble", "nope"]).0, 2);
}
