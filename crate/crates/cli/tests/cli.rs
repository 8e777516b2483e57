//! End-to-end tests of the binary: exit codes, output formats, and
//! diagnostics.

use std::io::Write;
use std::process::{Command, Output};

fn jengap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jengap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join("jengap-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path.to_str().unwrap().to_string()
}

const WORKED: &str = r#"{
  "x": [0.0, 1.0],
  "p": [0.2, 0.8],
  "q": [0.5, 0.5],
  "f": {"kind": "square"},
  "phi": {"kind": "power", "coefficient": 1.0, "exponent": 2.0},
  "interval": [0.0, 1.0]
}"#;

#[test]
fn eval_reports_the_functional() {
    let file = write_file("worked.json", WORKED);
    let out = jengap(&["--format", "json", "eval", &file]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let values = doc["reports"][0]["values"].as_array().unwrap();
    let jp = values
        .iter()
        .find(|v| v["name"] == "J(f,x,p)")
        .unwrap()["value"]
        .as_f64()
        .unwrap();
    assert!((jp - 0.16).abs() < 1e-12);
    assert_eq!(doc["verdict"], "verified");
}

#[test]
fn bounds_verify_and_exit_zero() {
    let file = write_file("worked2.json", WORKED);
    for theorem in ["1", "2", "4", "5", "6"] {
        let out = jengap(&["bounds", &file, "--theorem", theorem]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "theorem {theorem}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn refinements_verify_and_exit_zero() {
    let file = write_file("worked3.json", WORKED);
    for theorem in ["3", "7", "8", "9", "eq32"] {
        let out = jengap(&["refine", &file, "--theorem", theorem]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "theorem {theorem}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn malformed_weights_exit_two_and_name_the_field() {
    let file = write_file(
        "badsum.json",
        r#"{"x": [0.0, 1.0], "p": [0.4, 0.5], "f": {"kind": "square"}, "interval": [0.0, 1.0]}"#,
    );
    let out = jengap(&["eval", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("'p'"), "diagnostic names the field: {err}");
}

#[test]
fn unknown_json_fields_exit_two() {
    let file = write_file(
        "typo.json",
        r#"{"x": [0.0, 1.0], "p": [0.5, 0.5], "Q": [0.5, 0.5], "f": {"kind": "square"}, "interval": [0.0, 1.0]}"#,
    );
    let out = jengap(&["eval", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn invalid_theorem_tag_exits_two() {
    let file = write_file("worked4.json", WORKED);
    let out = jengap(&["bounds", &file, "--theorem", "3"]);
    assert_eq!(out.status.code(), Some(2), "bounds only takes 1,2,4,5,6");
    let out = jengap(&["fuzz", "--trials", "1", "--theorems", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_phi_exits_two_for_refinements() {
    let file = write_file(
        "nophi.json",
        r#"{"x": [0.0, 1.0], "p": [0.2, 0.8], "f": {"kind": "square"}, "interval": [0.0, 1.0]}"#,
    );
    let out = jengap(&["refine", &file, "--theorem", "eq32"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("phi"));
}

#[test]
fn uncertified_pair_is_refused_unless_skipped() {
    // exp with the d^2 coefficient of the square: fails certification.
    let file = write_file(
        "uncert.json",
        r#"{
            "x": [0.1, 0.9],
            "p": [0.3, 0.7],
            "f": {"kind": "exp"},
            "phi": {"kind": "power", "coefficient": 1.0, "exponent": 2.0},
            "interval": [0.0, 1.0]
        }"#,
    );
    let out = jengap(&["refine", &file, "--theorem", "eq32"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("uncertified"));
    // Skipping certification runs the (false) bound anyway; the slack
    // check then catches the violation and exits 1.
    let out = jengap(&["refine", &file, "--theorem", "eq32", "--no-certify"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("violated"));
}

#[test]
fn failed_certificate_exits_one() {
    let file = write_file(
        "fail_cert.json",
        r#"{
            "x": [0.0, 1.0],
            "p": [0.5, 0.5],
            "f": {"kind": "square"},
            "phi": {"kind": "power", "coefficient": 2.0, "exponent": 2.0},
            "interval": [0.0, 1.0]
        }"#,
    );
    let out = jengap(&["certify", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn certify_by_name_needs_exponent_or_phi() {
    let out = jengap(&["certify", "square"]);
    assert_eq!(out.status.code(), Some(2));
    let out = jengap(&["certify", "square", "--exponent", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = jengap(&["certify", "exp", "--exponent", "2", "--interval", "0,2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn text_and_json_carry_identical_numbers() {
    let file = write_file("worked5.json", WORKED);
    let json = jengap(&["--format", "json", "bounds", &file, "--theorem", "1"]);
    let text = jengap(&["--format", "text", "bounds", &file, "--theorem", "1"]);
    let doc: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let text = String::from_utf8(text.stdout).unwrap();
    // Every chain value printed in the machine form appears verbatim in
    // the text table.
    for term in doc["reports"][0]["terms"].as_array().unwrap() {
        let sci = format!("{:.16e}", term["value"].as_f64().unwrap());
        assert!(text.contains(&sci), "{sci} missing from text output");
    }
}

#[test]
fn fuzz_single_trial_is_reproducible() {
    let args = ["--format", "json", "fuzz", "--seed", "7", "--trials", "1"];
    let a = jengap(&args);
    let b = jengap(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compare_ranks_refinements() {
    let file = write_file("worked6.json", WORKED);
    let out = jengap(&["--format", "json", "compare", &file]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let groups = doc["reports"][0]["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 2);
    assert!(groups[1]["entries"].as_array().unwrap().len() >= 2);
}

#[test]
fn version_and_tolerance_are_embedded() {
    let file = write_file("worked7.json", WORKED);
    let out = jengap(&[
        "--format",
        "json",
        "--tol-abs",
        "1e-9",
        "--tol-rel",
        "1e-8",
        "bounds",
        &file,
        "--theorem",
        "1",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["tolerance"]["atol"].as_f64().unwrap(), 1e-9);
    assert_eq!(doc["tolerance"]["rtol"].as_f64().unwrap(), 1e-8);
}
