use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lempert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lempert"))
        .args(args)
        .env_remove("LEMPERT_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn royal_residual_passes() {
    let out = lempert(&["verify", "--geodesic", "royal", "--inverse", "phi", "--grid", "64"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["config"]["grid"], 64);
    assert_eq!(doc["config"]["seed"], 42);
    let report = &doc["reports"][0];
    assert_eq!(report["check_name"], "left_inverse_residual");
    assert!(report["metrics"]["residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn diagonal_family_rebuilds_affine_inverse() {
    let out = lempert(&[
        "lempertize",
        "--geodesic",
        "diagonal",
        "--from-inverse",
        "family:t=0.5,h=const:0.3",
        "--samples",
        "1000",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert_eq!(doc["details"]["reference"], "affine:t=0.5");
    let agreement = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check_name"] == "inverse_agreement")
        .unwrap();
    assert!(agreement["metrics"]["max_difference"].as_f64().unwrap() < 1e-8);
}

#[test]
fn psi_limit_along_linear_path_is_zero() {
    let out = lempert(&["probe", "--inverse", "psi:omega=0", "--path", "linear-g2:c=0.5", "--len", "12"]);
    assert_eq!(code(&out), 0);
    let metrics = &json_of(&out)["reports"][0]["metrics"];
    assert!(metrics["limit_abs"].as_f64().unwrap() < 1e-9);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&lempert(&["verify", "--geodesic", "royal", "--inverse", "nope"])), 2);
    assert_eq!(code(&lempert(&["verify", "--inverse", "phi"])), 2);
    assert_eq!(code(&lempert(&["verify", "--geodesic", "royal", "--inverse", "ball-simple"])), 2);
    assert_eq!(code(&lempert(&["probe", "--inverse", "phi", "--path", "linear-g2:c=2"])), 2);
    assert_eq!(code(&lempert(&["frobnicate"])), 2);
    assert_eq!(code(&lempert(&["suite", "--tolerance", "1"])), 2);
}

#[test]
fn numeric_failure_exits_3() {
    // v·f' vanishes identically on the diagonal.
    let out = lempert(&["lempertize", "--geodesic", "diagonal", "--field", "const:v1=1,v2=-1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn check_failure_exits_1() {
    let out = lempert(&[
        "lempertize",
        "--geodesic",
        "flat",
        "--field",
        "flat-psi:omega=0",
        "--field",
        "flat-psi:omega=0.5",
        "--t",
        "0.3",
        "--reference",
        "psi:omega=0.5,radius=0.4",
        "--samples",
        "100",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["pass"], false);

    let out = lempert(&["verify", "--geodesic", "royal", "--inverse", "phi", "--check", "duality", "--tolerance", "1e-300"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn combined_flat_fields_match_combined_omega() {
    let out = lempert(&[
        "lempertize",
        "--geodesic",
        "flat",
        "--field",
        "flat-psi:omega=0",
        "--field",
        "flat-psi:omega=0.5",
        "--t",
        "0.3",
        "--reference",
        "psi:omega=0,radius=0.4",
        "--samples",
        "100",
    ]);
    assert_eq!(code(&out), 0);
}

fn run_to_file(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--output", &p]);
    let out = lempert(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(&path).unwrap()
}

#[test]
fn same_seed_gives_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["distance", "--domain", "symbidisc", "--pairs", "40", "--seed", "7"];
    let a = run_to_file(dir.path(), "a.json", &args);
    let b = run_to_file(dir.path(), "b.json", &args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run_to_file(dir.path(), "c.json", &seq);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let other = run_to_file(dir.path(), "d.json", &["distance", "--domain", "symbidisc", "--pairs", "40", "--seed", "8"]);
    assert_ne!(a, other);
}

#[test]
fn sample_csv_has_header_and_rows() {
    let out = lempert(&["sample", "--domain", "symbidisc", "--n", "5", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "domain,re_z1,im_z1,re_z2,im_z2");
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.starts_with("symbidisc,") && l.split(',').count() == 5));
    let again = lempert(&["sample", "--domain", "symbidisc", "--n", "5", "--seed", "3"]);
    assert_eq!(text.as_bytes(), again.stdout.as_slice());
}

#[test]
fn series_csv_dump() {
    let out = lempert(&["verify", "--geodesic", "royal", "--inverse", "phi", "--grid", "8", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,x,re,im"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn output_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lempert"))
        .args(["verify", "--geodesic", "diagonal", "--inverse", "affine:t=0.25", "--output", "nested/report.json"])
        .env("LEMPERT_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&std::fs::read(dir.path().join("nested/report.json")).unwrap()).unwrap();
    assert_eq!(doc["pass"], true);
}

#[test]
fn suite_subset_by_title() {
    let out = lempert(&["suite", "--only", "fiber"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    let ids: Vec<&str> = doc["details"]["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["A3", "A4"]);
    assert_eq!(code(&lempert(&["suite", "--only", "no-such-criterion"])), 1);
}
