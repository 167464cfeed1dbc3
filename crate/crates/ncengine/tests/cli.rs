//! End-to-end tests of the command-line binary: output shape, precedence,
//! determinism, and the exit-code contract
//! (0 ok / 1 verification failure / 2 invalid input / 3 domain violation).

use std::process::{Command, Output};

fn ncengine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncengine"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Pulls a named column out of the single data row of a CSV record.
fn csv_cell(text: &str, column: &str) -> String {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == column)
        .unwrap_or_else(|| panic!("column {column} in {header:?}"));
    lines.next().unwrap().split(',').nth(idx).unwrap().to_string()
}

#[test]
fn otto_commutative_defaults() {
    let out = ncengine(&["otto", "--space", "comm"]);
    assert!(out.status.success());
    let eta: f64 = csv_cell(&stdout(&out), "efficiency").parse().unwrap();
    assert!((eta - 0.25).abs() < 1e-12);
}

#[test]
fn nc_theta_zero_matches_commutative() {
    let out = ncengine(&["otto", "--space", "nc", "--theta", "0"]);
    assert!(out.status.success());
    let eta: f64 = csv_cell(&stdout(&out), "efficiency").parse().unwrap();
    assert!((eta - 0.25).abs() < 1e-12);
}

#[test]
fn gnc_zero_deformation_matches_commutative_stirling() {
    let gnc = ncengine(&[
        "stirling", "--space", "gnc", "--gamma", "0", "--xi", "0", "--mode", "exact",
    ]);
    let comm = ncengine(&["stirling", "--space", "comm", "--mode", "exact"]);
    assert!(gnc.status.success() && comm.status.success());
    for column in ["work", "heat_in", "efficiency", "q_ab", "q_bc", "q_cd", "q_da"] {
        let a: f64 = csv_cell(&stdout(&gnc), column).parse().unwrap();
        let b: f64 = csv_cell(&stdout(&comm), column).parse().unwrap();
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{column}: {a} vs {b}");
    }
}

#[test]
fn unknown_space_is_invalid_input() {
    let out = ncengine(&["otto", "--space", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_axis_is_invalid_input() {
    let out = ncengine(&["sweep", "--axis", "zeta=5:0:10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_mode_frequency_is_domain_violation() {
    // theta large enough that the lower deformed frequency goes negative
    let out = ncengine(&["otto", "--space", "nc", "--theta", "40"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("non-positive mode frequency"), "{err}");
}

#[test]
fn verify_passes_at_defaults_and_fails_with_coarse_step() {
    let ok = ncengine(&["verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8(ok.stderr).unwrap());

    let bad = ncengine(&["verify", "--fd-step", "0.4"]);
    assert_eq!(bad.status.code(), Some(1));
    let err = String::from_utf8(bad.stderr).unwrap();
    assert!(err.contains("verification failure"), "{err}");
    assert!(err.contains("internal energy"), "{err}");
}

#[test]
fn flags_override_config_file_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "zeta = 9.0\nt-hot = 3.0\nspace = nc\ntheta = 0.5\n").unwrap();
    let out = ncengine(&[
        "otto",
        "--config",
        path.to_str().unwrap(),
        "--zeta",
        "2.0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    // flag beats file
    assert!(text.contains("# zeta = 2.0000000000000000e0"), "{text}");
    // file beats default
    assert!(text.contains("# t_hot = 3.0000000000000000e0"), "{text}");
    assert!(text.contains("# space = nc"), "{text}");
    assert!(text.contains("# theta = 5.0000000000000000e-1"), "{text}");
    // untouched default remains
    assert!(text.contains("# omega_cold = 3.0000000000000000e0"), "{text}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["sweep", "--engine", "stirling", "--axis", "zeta=0:3:7", "--mode", "exact"];
    let a = ncengine(&args);
    let b = ncengine(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_parses() {
    let out = ncengine(&["otto", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["result"]["efficiency"].is_f64());
    assert_eq!(doc["config"]["engine"], "otto");
}
