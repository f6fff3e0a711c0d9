use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(file)
}

fn wb(args: &[&str], input: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poisson-wb"))
        .args(args)
        .arg("--input")
        .arg(input)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn check_passes_on_the_log_plane() {
    let out = wb(&["check"], &fixture("f2_log_plane.json"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass Jacobi identity"));
    assert!(text.ends_with("verdict: pass (0 skipped)\n"));
}

#[test]
fn bv_report_on_the_log_plane() {
    let out = wb(&["bv", "--window", "3", "--format", "json"], &fixture("f2_log_plane.json"));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    let status = |name: &str| checks.iter().find(|c| c["name"] == name).map(|c| c["status"].clone()).unwrap();
    for axiom in ["Delta(1) = 0", "Delta^2 = 0", "seven-term identity", "bracket antisymmetry"] {
        assert_eq!(status(&format!("{axiom} [primal]")), "pass");
        assert_eq!(status(&format!("{axiom} [Koszul dual]")), "pass");
    }
    // the generated bracket is minus the Schouten bracket on the polynomial side
    assert_eq!(status("generated bracket = Schouten bracket [primal]"), "fail");
    assert_eq!(status("generated bracket = Schouten bracket [Koszul dual]"), "pass");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report["verdict"]["first_failure"], "generated bracket = Schouten bracket [primal]");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("first failing check: generated bracket = Schouten bracket [primal]"));
}

#[test]
fn koszul_rejects_non_quadratic() {
    let out = wb(&["koszul", "--format", "json"], &fixture("f1_symplectic.json"));
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let failed = report["checks"].as_array().unwrap().iter().find(|c| c["status"] == "fail").unwrap();
    assert_eq!(failed["name"], "Koszul dual");
    assert_eq!(failed["witness"], "rejected: structure is not quadratic");
}

#[test]
fn preconditions_and_strict() {
    let input = fixture("f4_nilpotent.json");
    let out = wb(&["gravity", "--format", "json"], &input);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["modular"]["verdict"], "not-semisimple");
    let skipped = &report["checks"][1];
    assert_eq!(skipped["status"], "skipped");
    assert_eq!(skipped["reason"], "precondition: modular vector is not-semisimple");
    assert_eq!(wb(&["bv", "--strict"], &input).status.code(), Some(3));
}

#[test]
fn input_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("poisson-wb-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"variables":["x1","x2"],"parity":"even","bivector":[{"coeff":"1/0","monomial":{},"frame":[1,2]}]}"#).unwrap();
    let out = wb(&["check"], &bad);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("bivector[0].coeff: malformed rational \"1/0\""));
    assert_eq!(wb(&["check"], &dir.join("missing.json")).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn flags_are_validated() {
    let input = fixture("f2_log_plane.json");
    assert_eq!(wb(&["check", "--window", "0"], &input).status.code(), Some(2));
    assert_eq!(wb(&["check", "--arity", "2"], &input).status.code(), Some(2));
}

#[test]
fn out_writes_the_report() {
    let path = std::env::temp_dir().join(format!("poisson-wb-report-{}.json", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_poisson-wb"))
        .args(["modular", "--format", "json", "--input"])
        .arg(fixture("f3_quadratic_space.json"))
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["modular"]["eigenvalues"], serde_json::json!(["1/3", "3/2", "-11/6"]));
    std::fs::remove_file(&path).unwrap();
}
