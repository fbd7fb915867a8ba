//! End-to-end tests of the binary against the bundled instance files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn instance(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name);
    root.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distchoice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn choose_reproduces_the_golden_instance() {
    let out = run(&[
        "choose",
        "--instance",
        &instance("floors_ceilings_s5.json"),
        "--school",
        "c",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("chosen: {s1, s4, s5}"));

    let out = run(&[
        "choose",
        "--instance",
        &instance("floors_ceilings_s5.json"),
        "--school",
        "c",
        "--pool",
        "s1,s2,s3,s4",
    ]);
    assert!(stdout(&out).contains("chosen: {s1, s2, s3}"));
}

#[test]
fn path_independence_violation_exits_one_with_witness() {
    let out = run(&[
        "verify",
        "path-independence",
        "--instance",
        &instance("floors_ceilings_s5.json"),
        "--school",
        "c",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("kept=s4, removed=s5"));
}

#[test]
fn soft_variant_passes_verification() {
    for suite in ["path-independence", "structural-properties", "choice-axioms"] {
        let out = run(&[
            "verify",
            suite,
            "--instance",
            &instance("floors_ceilings_s5_soft.json"),
            "--school",
            "c",
        ]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
}

#[test]
fn da_matches_brute_force_on_the_additive_micro_market() {
    let out = run(&["da", "--instance", &instance("micro_market_additive.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // the unique matching passing all matching axioms (brute-forced in the
    // library's mechanism tests)
    assert!(text.contains("s1 -> b"));
    assert!(text.contains("s2 -> a"));
    assert!(text.contains("s3 -> a"));
    assert!(text.contains("s4 -> b"));
}

#[test]
fn json_reports_are_deterministic() {
    let args = [
        "verify",
        "structural-properties",
        "--instance",
        &instance("floors_ceilings_s5.json"),
        "--school",
        "c",
        "--format",
        "json",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["command"], "verify structural-properties");
}

#[test]
fn schema_and_domain_errors_exit_two() {
    let dir = std::env::temp_dir();

    let empty = dir.join("distchoice_empty_students.json");
    std::fs::write(&empty, r#"{"schema_version": 1, "students": []}"#).unwrap();
    let out = run(&["choose", "--instance", empty.to_str().unwrap(), "--school", "c"]);
    assert_eq!(out.status.code(), Some(2));

    let bad_bounds = dir.join("distchoice_bad_bounds.json");
    std::fs::write(
        &bad_bounds,
        r#"{
          "schema_version": 1,
          "students": ["s1"],
          "types": {"names": ["t"], "assignment": {"s1": "t"}},
          "schools": [{
            "id": "c", "capacity": 1, "priority": ["s1"],
            "preference": {"family": "dichotomous_bounds",
                           "params": {"floors": {"t": 3}, "ceilings": {"t": 1}}}
          }]
        }"#,
    )
    .unwrap();
    let out = run(&["choose", "--instance", bad_bounds.to_str().unwrap(), "--school", "c"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r_t <= p_t"));

    let unknown_field = dir.join("distchoice_unknown_field.json");
    std::fs::write(
        &unknown_field,
        r#"{"schema_version": 1, "students": ["s1"], "surprise": true}"#,
    )
    .unwrap();
    let out = run(&["choose", "--instance", unknown_field.to_str().unwrap(), "--school", "c"]);
    assert_eq!(out.status.code(), Some(2));

    // one semantically broken instance reports all of its errors at once
    let multi = dir.join("distchoice_multi_error.json");
    std::fs::write(
        &multi,
        r#"{
          "schema_version": 1,
          "students": ["s1", "s2"],
          "types": {"names": ["t"], "assignment": {"s1": "t", "s2": "ghost"}},
          "schools": [{
            "id": "c", "capacity": 0, "priority": ["s1"],
            "preference": {"family": "additive", "params": {"values": {"s1": 1.0}}}
          }]
        }"#,
    )
    .unwrap();
    let out = run(&["choose", "--instance", multi.to_str().unwrap(), "--school", "c"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(stderr.contains("ghost"), "{stderr}");
    assert!(stderr.contains("capacity"), "{stderr}");
    assert!(stderr.contains("missing value"), "{stderr}");
}

#[test]
fn reveal_reports_a_ranking_for_the_soft_instance() {
    let out = run(&[
        "reveal",
        "--instance",
        &instance("floors_ceilings_s5_soft.json"),
        "--school",
        "c",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("revealed ranking: s1 > s2 > s3 > s4 > s5"));
}
