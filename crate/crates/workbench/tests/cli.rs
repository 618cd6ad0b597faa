use std::ffi::OsString;

use souslin_workbench::cli::{run, EXIT_CONFIG, EXIT_PASS};

fn souslin(args: &[&str], stdin: &str) -> (i32, String) {
    let argv: Vec<OsString> = std::iter::once("souslin").chain(args.iter().copied()).map(OsString::from).collect();
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let code = run(argv, &mut input, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn oracle_suite_passes_with_seed_one() {
    let (code, text) = souslin(&["verify", "--suite", "cylinders-oracle", "--seed", "1"], "");
    assert_eq!(code, EXIT_PASS, "{text}");
    assert!(text.starts_with("cylinders-oracle (seed 1)"));
}

#[test]
fn oversized_window_is_a_config_error() {
    let (code, text) = souslin(&["verify", "--suite", "lusin", "--depth", "20"], "");
    assert_eq!(code, EXIT_CONFIG);
    assert!(text.contains("depth 20"), "{text}");
}

#[test]
fn unknown_suite_is_a_config_error() {
    let (code, text) = souslin(&["verify", "--suite", "nonsense"], "");
    assert_eq!(code, EXIT_CONFIG);
    assert!(text.contains("unknown suite"));
}

#[test]
fn missing_space_file_is_a_config_error() {
    let (code, _) = souslin(&["verify", "--suite", "choquet-finite", "--space", "/nonexistent/space.json"], "");
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn lusin_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let (code, _) = souslin(&["verify", "--suite", "lusin", "--json", p.to_str().unwrap()], "");
        assert_eq!(code, EXIT_PASS);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn every_suite_passes_by_default() {
    for suite in ["schemes-vg", "choquet-finite", "choquet-extract", "selectors"] {
        let (code, text) = souslin(&["verify", "--suite", suite], "");
        assert_eq!(code, EXIT_PASS, "{suite}: {text}");
    }
}

#[test]
fn finite_space_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    std::fs::write(&path, r#"{"points": 3, "opens": [[2], [1, 2]]}"#).unwrap();
    let (code, text) = souslin(&["verify", "--suite", "choquet-finite", "--space", path.to_str().unwrap()], "");
    assert_eq!(code, EXIT_PASS, "{text}");
}

#[test]
fn export_expression() {
    let (code, text) = souslin(&["export", "expr", "S(0,1) \\ S(0,1,2)"], "");
    assert_eq!(code, EXIT_PASS, "{text}");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.get("op").is_some(), "{v}");
}

#[test]
fn export_rejects_bad_expression() {
    let (code, _) = souslin(&["export", "expr", "S(0,"], "");
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn build_lusin_and_extract_pass() {
    let (code, text) = souslin(&["build-lusin", "--depth", "3", "--breadth", "4"], "");
    assert_eq!(code, EXIT_PASS, "{text}");
    let (code, text) = souslin(&["extract", "--space", "discrete:3"], "");
    assert_eq!(code, EXIT_PASS, "{text}");
    let (code, text) = souslin(&["extract", "--space", "baire", "--strategy", "cylinder"], "");
    assert_eq!(code, EXIT_PASS, "{text}");
}

#[test]
fn cylinder_strategy_needs_the_baire_space() {
    let (code, _) = souslin(&["extract", "--space", "sierpinski", "--strategy", "cylinder"], "");
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn play_session_through_the_cli() {
    let (code, text) = souslin(&["play", "--space", "sierpinski"], "{0,1}\n{1}\n:quit\n");
    assert_eq!(code, EXIT_PASS, "{text}");
    assert!(text.contains("II: {1}"), "{text}");
}
