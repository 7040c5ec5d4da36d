use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supergaudin")).args(args).output().expect("binary runs")
}

fn write_config(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("supergaudin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn demo_passes_and_is_byte_stable() {
    let a = bin(&["--demo", "gl2-bethe"]);
    let b = bin(&["--demo", "gl2-bethe"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["summary"]["fail"], 0);
    assert!(doc["results"].as_array().unwrap().iter().all(|r| r["millis"].is_null()));
}

#[test]
fn timings_are_recorded_on_request() {
    let out = bin(&["--demo", "gl2-bethe", "--check", "commutativity", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["results"].as_array().unwrap().iter().all(|r| r["millis"].is_number()));
}

#[test]
fn config_errors_exit_with_two() {
    assert_eq!(bin(&["--demo", "no-such-demo"]).status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
    assert_eq!(bin(&["--demo", "gl2-bethe", "--z", "1,1"]).status.code(), Some(2));
    assert_eq!(bin(&["--demo", "gl2-bethe", "--check", "nonsense"]).status.code(), Some(2));
    let bad = write_config("bad.json", r#"{"m": 2, "n": 0, "sites": [[1]], "z": [0], "colour": 1}"#);
    let out = bin(&["--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn flags_override_the_config_file() {
    let cfg = write_config(
        "gl2.json",
        r#"{"m": 2, "n": 0, "sites": [[1], [1]], "z": [0, 2], "checks": ["bethe"], "seed": 5}"#,
    );
    let report = cfg.with_file_name("report.json");
    let out = bin(&[
        "--config",
        cfg.to_str().unwrap(),
        "--check",
        "commutativity",
        "--z",
        "1/2,3",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["config"]["checks"], serde_json::json!(["commutativity"]));
    assert_eq!(doc["config"]["z"], serde_json::json!(["1/2", "3"]));
    assert!(doc["results"].as_array().unwrap().iter().all(|r| r["check"] == "commutativity"));
}

#[test]
fn list_names_every_check() {
    let out = bin(&["--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for c in supergaudin::cli::KNOWN_CHECKS {
        assert!(text.contains(c));
    }
}
