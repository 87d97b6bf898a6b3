use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const A2_HALF: &str = r#"{
    "group": {"label": "A2"},
    "torus": [{"kind": "torsion", "values": ["1/2", "0"]}],
    "springer": {"r": 1, "u_sets": ["positive_roots"], "v_sets": [[[1, 0], [-1, 0], [1, 1], [-1, -1]]]}
}"#;

fn qhecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhecke")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn preset(dir: &Path, name: &str, args: &[&str]) -> String {
    let o = qhecke(&[&["preset"], args].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let path = dir.join(name);
    std::fs::write(&path, stdout(&o)).unwrap();
    path.to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn check_named<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn nilhecke_a2_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset(dir.path(), "a2.json", &["nilhecke", "A2"]);
    let o = qhecke(&["--config", &cfg, "check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert!(report["timings"].as_object().unwrap().contains_key("relations"));
    assert_eq!(report["config_echo"]["group"]["label"], "A2");
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset(dir.path(), "a1.json", &["nilhecke", "A1"]);
    let out = dir.path().join("report.json");
    let o = qhecke(&["--config", &cfg, "--out", out.to_str().unwrap(), "--checks", "relations", "check"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(check_named(&report, "quadratic")["status"] == "pass");
}

#[test]
fn describe_half_integral_a2_has_three_cosets() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "half.json", A2_HALF);
    let o = qhecke(&["--config", &cfg, "describe"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("#I = 3"), "{text}");
    assert!(text.contains("#W = 2"), "{text}");
}

#[test]
fn skew_a2_braid_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset(dir.path(), "skew.json", &["skew", "A2"]);
    let o = qhecke(&["--config", &cfg, "braid", "--s", "0", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let coeffs = report["result"]["coefficients"].as_array().unwrap();
    let value =
        |word: &str| coeffs.iter().find(|c| c["element"] == word).map(|c| c["value"].as_str().unwrap().to_string());
    assert_eq!(value("s0").as_deref(), Some("1"));
    assert_eq!(value("s1").as_deref(), Some("-1"));
}

#[test]
fn act_applies_a_demazure_operator() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset(dir.path(), "a2.json", &["nilhecke", "A2"]);
    let o = qhecke(&["--config", &cfg, "act", "--expr", "s(0,1)*z(0,1)", "--element", r#"["e1^2"]"#]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["result"]["output"][0], "3*e1^2 + 3*e1*e2 + e2^2");
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset(dir.path(), "a2.json", &["nilhecke", "A2"]);
    let o = qhecke(&["--config", &cfg, "act", "--expr", "s(0,9)", "--element", r#"["e1"]"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 0"));

    let bad = write(dir.path(), "bad.json", r#"{"group": {"label": "A2"}, "bogus": 1}"#);
    let o = qhecke(&["--config", &bad, "check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));

    let o = qhecke(&["preset", "klr", "--vertices", "1", "--arrows", "", "--dims", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_check_exits_with_one() {
    // Long roots of B3: an adapted parabolic whose factorization leaves W.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "b3.json",
        r#"{"group": {"label": "B3"}, "torus": [{"kind": "torsion", "values": ["1/2", "0", "0"]}]}"#,
    );
    let o = qhecke(&["--config", &cfg, "--checks", "combinatorics", "check"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("FAILED factorization"));
}

#[test]
fn klr_preset_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset(dir.path(), "klr.json", &["klr", "--vertices", "1,2", "--arrows", "1:2", "--dims", "2,1"]);
    let o = qhecke(&["--config", &cfg, "--checks", "oracle", "check", "--samples", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(check_named(&report, "klr-h-counts")["status"] == "pass");
}
