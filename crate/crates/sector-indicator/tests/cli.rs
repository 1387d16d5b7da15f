//! Exit-code contract and output-shape checks for the command-line front end.

use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sector-indicator"));
    c.env(sector_indicator::cli::THREADS_ENV, "2");
    c
}

#[test]
fn bound_prints_the_sharp_constants() {
    let out = bin()
        .args([
            "bound", "--alpha1", "0.7853981633974483", "--alpha2", "0.7853981633974483",
            "--theta1", "0", "--theta2", "0", "--a1p", "0.7071067811865476", "--a1m",
            "0.7071067811865476", "--a2p", "0.7071067811865476", "--a2m", "0.7071067811865476",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), r#"{"C1":1.0,"C2":1.0}"#);
}

#[test]
fn bound_with_theta_at_alpha_returns_a1p() {
    let out = bin()
        .args([
            "bound", "--alpha1", "0.7853981633974483", "--alpha2", "0.7853981633974483",
            "--theta1", "0.7853981633974483", "--theta2", "0", "--a1p", "0.25", "--a1m", "9.0",
            "--a2p", "1", "--a2m", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["C1"].as_f64().unwrap() - 0.25).abs() < 1e-13);
}

#[test]
fn invalid_inputs_exit_two() {
    // alpha out of range
    let out = bin()
        .args([
            "bound", "--alpha1", "2.0", "--alpha2", "0.785", "--theta1", "0", "--theta2", "0",
            "--a1p", "1", "--a1m", "1", "--a2p", "1", "--a2m", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // unknown flag
    let out = bin().args(["bound", "--frequency", "60"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // transform argument outside every half plane
    let out = bin()
        .args(["transform", "--function", "exp:1,0,1,0", "--omega1", "0,0", "--omega2", "-3,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // unknown function id
    let out = bin()
        .args(["member", "--function", "wat", "--theta1", "0", "--theta2", "0", "--nu1", "1", "--nu2", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn member_matches_spec_example() {
    let out = bin()
        .args([
            "member", "--function", "exp:1,0,1,0", "--theta1", "0", "--theta2", "0", "--nu1",
            "1", "--nu2", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["accepted"], serde_json::Value::Bool(true));
}

#[test]
fn config_file_supplies_missing_flags() {
    let dir = std::env::temp_dir().join("sector-indicator-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("member.conf");
    std::fs::write(&cfg, "function = exp:1,0,1,0\ntheta2 = 0\nnu1 = 1\nnu2 = 1\n").unwrap();
    let out = bin()
        .args(["member", "--theta1", "0", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["accepted"], serde_json::Value::Bool(true));

    // unknown key in the config is rejected
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let out = bin()
        .args(["member", "--function", "exp:1,0,1,0", "--theta1", "0", "--theta2", "0", "--nu1", "1", "--nu2", "1", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes_follow_outcomes() {
    let dir = std::env::temp_dir().join("sector-indicator-cli-verify");
    std::fs::create_dir_all(&dir).unwrap();
    let base = dir.join("sharp");
    let out = bin()
        .args(["verify", "sharpness", "--output", base.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    assert!(csv.starts_with("case_id,inputs,expected,actual,error,pass\n"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(base.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(summary["pass"], serde_json::Value::Bool(true));

    // deliberately deflated constants must fail the convexity suite
    let base2 = dir.join("deflated");
    let out = bin()
        .args([
            "verify", "convexity", "--function", "exp:1,0,1,0", "--deflate", "0.1", "--output",
            base2.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // unknown suite is invalid input
    let out = bin().args(["verify", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invert_deformed_rejects_mismatched_polar_flag_usage() {
    // z too small for certified truncation
    let out = bin()
        .args(["invert", "--function", "exp:1,0,1,0", "--z1", "1,0", "--z2", "0.001,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
