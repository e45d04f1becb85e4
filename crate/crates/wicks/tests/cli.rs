//! Black-box tests of the command-line interface: output shape, word
//! round-trips, determinism, and exit codes.

use std::process::{Command, Output};

fn wicks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wicks"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = wicks(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn genus_command_reports_both_kinds() {
    let text = stdout(&["genus", "a^-1 b^-1 a b"]);
    assert!(text.contains("genus+ = 1"), "{text}");
    assert!(text.contains("genus- = 3"), "{text}");
    let only = stdout(&["genus", "a^-1 b^-1 a b", "--orientable"]);
    assert!(only.contains("genus+ = 1") && !only.contains("genus-"), "{only}");
}

#[test]
fn genus_of_nonmember_prints_infinity() {
    let text = stdout(&["genus", "a b"]);
    assert!(text.contains("genus+ = infinity"), "{text}");
    assert!(text.contains("genus- = infinity"), "{text}");
}

#[test]
fn json_output_carries_the_schema_fields() {
    let raw = stdout(&["--format", "json", "solve", "commutators", "a^-2 b^-3 a^2 b^3"]);
    let value: serde_json::Value = serde_json::from_str(&raw).expect("valid json");
    assert_eq!(value["genus"], 1);
    assert!(value["equation"].as_str().unwrap().contains("[x1,y1]"));
    let classes = value["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 4);
    for class in classes {
        assert!(class["assignments"].is_object());
        assert!(class["lengths"].is_object());
        assert!(class["fingerprint_id"].is_string());
        assert_eq!(class["distinctness"], "resolved-distinct");
    }
    assert!(value["certificates"]["genus"].is_string());
}

#[test]
fn witness_words_round_trip_through_the_parser() {
    for (family, n) in [("u1", 1), ("u1", 3), ("u2", 1), ("u2", 2)] {
        let printed = stdout(&["witness", family, &n.to_string()]);
        let printed = printed.trim();
        let reparsed = wicks::word::Word::parse_constant(printed).expect("parseable");
        assert_eq!(reparsed.to_string(), printed, "{family} {n}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["genus", "b^-1 a^-1 b^2 a b^-1 a b a^-1 b^-1 a"],
        vec!["--format", "json", "solve", "squares", "a^2 b^4"],
        vec!["wicks", "nonorientable", "3"],
    ] {
        let first = stdout(&args);
        let second = stdout(&args);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn wicks_listing_matches_the_census() {
    let text = stdout(&["wicks", "orientable", "1"]);
    assert!(text.starts_with("orientable genus 1: 2 forms"), "{text}");
    let maximal = stdout(&["wicks", "nonorientable", "2", "--maximal"]);
    assert!(maximal.contains("2 forms"), "{maximal}");
}

#[test]
fn reduce_solution_walks_the_trace() {
    let text = stdout(&["reduce-solution", "x x y y", "x=a b", "y=b^-1 a"]);
    assert!(text.contains("moves: 1"), "{text}");
    assert!(text.contains("cancellation"), "{text}");
    assert!(text.contains("reduced word:"), "{text}");
}

#[test]
fn exit_codes_separate_usage_from_failure() {
    // Unparseable word: usage error.
    let out = wicks(&["genus", "a^"]);
    assert_eq!(out.status.code(), Some(2));
    // Violated reduction hypothesis (word is not quadratic): runtime failure.
    let out = wicks(&["reduce-solution", "x y", "x=a", "y=b"]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown flag: usage error from the argument parser.
    let out = wicks(&["--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_honors_the_table_dir_flag() {
    let dir = tempdir();
    // A full listing writes the cache file; solving then reads it back.
    stdout(&["--table-dir", dir.to_str().unwrap(), "wicks", "orientable", "1"]);
    assert!(
        std::fs::read_dir(&dir).unwrap().count() > 0,
        "table files were written"
    );
    let text = stdout(&[
        "--table-dir",
        dir.to_str().unwrap(),
        "solve",
        "commutators",
        "a^-1 b^-1 a b",
    ]);
    assert!(text.contains("classes = 1"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("wicks-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
