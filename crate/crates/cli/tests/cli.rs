//! End-to-end command coverage: exit codes, text/json agreement, schema
//! conformance, and the corpus file round-trip through the real binary.

mod common;

use common::{load_schema, run, validate};
use serde_json::Value;

#[test]
fn infer_reports_the_selected_stereotype_and_consequences() {
    let out = run(&["infer", "--kb", "builtin:example3", "--given", "a | b"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.contains("F = {w3, w5}"));
    assert!(out.stdout.contains("chosen: s3"));
    assert!(out.stdout.contains("F' = {w3}"));
    assert!(out.stdout.contains("consistent: yes"));
}

#[test]
fn infer_json_validates_and_agrees_with_text() {
    let json_out = run(&[
        "infer",
        "--kb",
        "builtin:example3",
        "--given",
        "a | b",
        "--query",
        "a",
        "--format",
        "json",
    ]);
    assert_eq!(json_out.code, 0);
    let doc: Value = serde_json::from_str(&json_out.stdout).expect("json output parses");
    validate(&doc, &load_schema("inference-result.schema.json"), "$");
    assert_eq!(doc["chosen"], "s3");
    assert_eq!(doc["consequences"], serde_json::json!(["w3"]));
    assert_eq!(doc["distances"]["s3"], "3");
    assert_eq!(doc["distances"]["s1"], "inf");
    assert_eq!(doc["query"]["entailed"], true);

    let text_out = run(&[
        "infer",
        "--kb",
        "builtin:example3",
        "--given",
        "a | b",
        "--query",
        "a",
    ]);
    assert!(text_out.stdout.contains("entailed: yes"));
}

#[test]
fn infer_on_contradictory_facts_is_vacuous() {
    let out = run(&[
        "infer",
        "--kb",
        "builtin:example1",
        "--given",
        "a & ~a",
        "--query",
        "false",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("F' = {}"));
    assert!(out.stdout.contains("chosen: (none)"));
    assert!(out.stdout.contains("entailed: yes"));
}

#[test]
fn queries_equal_to_the_facts_are_always_entailed() {
    for kb in ["builtin:example1", "builtin:example2", "builtin:example4"] {
        let out = run(&["infer", "--kb", kb, "--given", "a", "--query", "a"]);
        assert_eq!(out.code, 0, "{}", kb);
        assert!(out.stdout.contains("entailed: yes"), "{}", kb);
    }
}

#[test]
fn ties_exit_with_the_dedicated_code() {
    let out = run(&["infer", "--kb", "builtin:tie", "--given", "true"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("s_a"));
    assert!(out.stderr.contains("s_b"));

    let explain = run(&["explain", "--kb", "builtin:tie", "--given", "true"]);
    assert_eq!(explain.code, 3);
    assert!(explain.stdout.contains("NON-UNIQUE MINIMUM: s_a, s_b"));
}

#[test]
fn explain_sorts_ascending_and_marks_the_minimum() {
    let out = run(&["explain", "--kb", "builtin:example4", "--given", "~c & ~(a & b)"]);
    assert_eq!(out.code, 0);
    let s0 = out.stdout.find("* s0").expect("minimum marked");
    let s1 = out.stdout.find("s1").expect("s1 row");
    let s2 = out.stdout.find("s2").expect("s2 row");
    assert!(s0 < s1 && s1 < s2, "rows out of order:\n{}", out.stdout);
    assert!(out.stdout.contains("4/3"));
    assert!(out.stdout.contains("8/3"));
    assert!(out.stdout.contains("unique minimum: s0"));
}

#[test]
fn check_exit_codes_follow_the_verdicts() {
    let fail = run(&["check", "--kb", "builtin:example2", "--property", "four"]);
    assert_eq!(fail.code, 1);
    assert!(fail.stdout.contains("verdict: FAIL"));

    let pass = run(&["check", "--kb", "builtin:example4", "--property", "eq2"]);
    assert_eq!(pass.code, 0);
    assert!(pass.stdout.contains("verdict: PASS"));

    let mixed = run(&["check", "--kb", "builtin:example4", "--property", "all"]);
    assert_eq!(mixed.code, 1);
    assert!(mixed.stdout.contains("property: assumption-four"));
    assert!(mixed.stdout.contains("property: klm:or"));

    let err = run(&["check", "--kb", "builtin:example4", "--property", "nonsense"]);
    assert_eq!(err.code, 2);
}

#[test]
fn check_json_validates_and_matches_text_verdicts() {
    let schema = load_schema("check-report.schema.json");
    for (kb, property) in [
        ("builtin:example2", "four"),
        ("builtin:example4", "all"),
        ("builtin:tie", "klm:cumulativity"),
        ("builtin:eq2-violation", "eq2"),
    ] {
        let json_out = run(&["check", "--kb", kb, "--property", property, "--format", "json"]);
        let docs: Value = serde_json::from_str(&json_out.stdout).expect("json parses");
        let docs = docs.as_array().expect("array of reports");
        for doc in docs {
            validate(doc, &schema, "$");
        }
        let text_out = run(&["check", "--kb", kb, "--property", property]);
        assert_eq!(json_out.code, text_out.code, "{} {}", kb, property);
        for doc in docs {
            let line = format!("verdict: {}", doc["verdict"].as_str().unwrap());
            assert!(text_out.stdout.contains(&line), "{} {}", kb, property);
        }
    }
}

#[test]
fn verify_exit_codes_cover_pass_and_not_applicable() {
    let pass = run(&["verify", "--kb", "builtin:example2", "--theorem", "1"]);
    assert_eq!(pass.code, 0);

    let pass = run(&["verify", "--kb", "builtin:example3", "--theorem", "2"]);
    assert_eq!(pass.code, 0);

    let na = run(&["verify", "--kb", "builtin:example4", "--theorem", "2"]);
    assert_eq!(na.code, 4);
    assert!(na.stdout.contains("NOT_APPLICABLE"));

    let err = run(&["verify", "--kb", "builtin:example4", "--theorem", "3"]);
    assert_eq!(err.code, 2);
}

#[test]
fn load_errors_exit_2() {
    let missing = run(&["infer", "--kb", "/no/such/file.json", "--given", "a"]);
    assert_eq!(missing.code, 2);

    let unknown = run(&["infer", "--kb", "builtin:example9", "--given", "a"]);
    assert_eq!(unknown.code, 2);
    assert!(unknown.stderr.contains("example1"));

    let bad_formula = run(&["infer", "--kb", "builtin:example1", "--given", "a &&"]);
    assert_eq!(bad_formula.code, 2);
    assert!(bad_formula.stderr.contains("offset"));
}

#[test]
fn corpus_files_load_from_disk_too() {
    let path = common::repo_root().join("corpus").join("example4.json");
    let out = run(&[
        "check",
        "--kb",
        path.to_str().unwrap(),
        "--property",
        "tree",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.contains("verdict: PASS"));
}

#[test]
fn search_validates_bounds_and_emits_schema_conformant_evidence() {
    let bad = run(&["search", "--worlds", "5"]);
    assert_eq!(bad.code, 2);

    let out = run(&["search", "--worlds", "3", "--max-stereotypes", "2", "--format", "json"]);
    assert_eq!(out.code, 0);
    let doc: Value = serde_json::from_str(&out.stdout).expect("json parses");
    validate(&doc, &load_schema("search-evidence.schema.json"), "$");
    assert!(doc["stats"]["nonrepresentable"].as_u64().unwrap() > 0);

    let text = run(&["search", "--worlds", "1"]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.contains("found=0"));
}

#[test]
fn scale_limit_respects_budget_flag_and_environment() {
    let limited = run(&[
        "check",
        "--kb",
        "builtin:example2",
        "--property",
        "eq2",
        "--budget",
        "10",
    ]);
    assert_eq!(limited.code, 2);
    assert!(limited.stderr.contains("budget"));

    let overridden = run(&[
        "check",
        "--kb",
        "builtin:example2",
        "--property",
        "eq2",
        "--budget",
        "10",
        "--override-scale-limit",
    ]);
    assert_eq!(overridden.code, 0);

    let via_env = common::stereo()
        .args(["check", "--kb", "builtin:example2", "--property", "eq2"])
        .env("STEREO_BUDGET", "10")
        .output()
        .expect("binary runs");
    assert_eq!(via_env.status.code(), Some(2));
}
