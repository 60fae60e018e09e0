mod common;

use common::fixture_path;
use gored::cli::{run, Outcome};

fn gored(args: &[&str]) -> Outcome {
    let mut argv = vec!["gored".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    run(argv)
}

fn path(name: &str) -> String {
    fixture_path(name).display().to_string()
}

#[test]
fn check_reports_dimension() {
    let out = gored(&["check", &path("ex46.alg")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("14"));
}

#[test]
fn malformed_input_exits_one() {
    assert_eq!(gored(&["check", &path("bad.alg")]).code, 1);
    assert_eq!(gored(&["check", "/nonexistent/a.alg"]).code, 1);
    assert_eq!(gored(&["gproj", &path("ex46.alg"), "--simple", "9"]).code, 1);
}

#[test]
fn structured_output_is_json() {
    let out = gored(&["--format", "structured", "gorenstein", &path("loop-x2.alg")]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["command"], "gorenstein");
    assert_eq!(v["config"]["bound"], 20);
}

#[test]
fn reduce_exit_codes() {
    assert_eq!(gored(&["reduce", &path("ex46.alg")]).code, 0);
    assert_eq!(gored(&["reduce", &path("ex48.alg")]).code, 0);
    let out = gored(&["reduce", &path("ex47.alg"), "--idempotent", "2,4"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn tiny_bound_leaves_verdicts_open() {
    let out = gored(&["--bound", "1", "gorenstein", &path("ex47C.alg")]);
    assert_eq!(out.code, 2, "{}", out.stdout);
}

#[test]
fn gproj_exit_codes() {
    assert_eq!(gored(&["gproj", &path("ex46.alg"), "--simple", "4", "--complete"]).code, 0);
    let no = gored(&["gproj", &path("ex46.alg"), "--simple", "1"]);
    assert_eq!(no.code, 0, "{}", no.stderr);
    assert!(no.stdout.to_lowercase().contains("not"));
}

#[test]
fn ext_reads_module_files() {
    let dir = std::env::temp_dir().join(format!("gored-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("free.mod");
    std::fs::write(&m, "dims 2\narrow x: [0 0; 1 0]\n").unwrap();
    let out = gored(&[
        "--format", "structured", "ext", &path("loop-x2.alg"),
        "--module", m.to_str().unwrap(), "--simple", "1", "--jmax", "3",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let s = v["result"].to_string();
    assert!(s.contains("[1,0,0,0]"), "{s}");
    std::fs::remove_dir_all(&dir).ok();
}
