use std::path::Path;
use std::process::Command;

use cartankit_cli::{run, RunReport};
use proptest::prelude::*;
use serde_json::Value;

fn cli(args: &[&str]) -> cartankit_cli::Outcome {
    run(std::iter::once("cartankit").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let out = cli(&a);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.exit_code, serde_json::from_str(&out.stdout).unwrap())
}

#[test]
fn e6_type_minimum_report() {
    let (code, v) = json(&["qform", "min", "--form", "e6_type_scaled_inverse", "--expect", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], 4);
    assert_eq!(v["command"], "qform min");
}

#[test]
fn z2_cubed_enumeration_report() {
    let (code, v) = json(&["block", "enumerate", "--scenario", "z2cubed_f21"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["classes"], 1);
    let (code, c) = json(&[
        "qform",
        "congruent",
        "--left",
        "cartan_e21_d8",
        "--right",
        &v["results"]["sets"][0]["block_cartan"].to_string(),
    ]);
    assert_eq!((code, &c["results"]["congruent"]), (0, &Value::Bool(true)));
}

#[test]
fn snf_of_ones_plus_identity() {
    let (code, v) = json(&["exactlin", "snf", "--matrix", "ones_plus_identity_3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["diagonal"], serde_json::json!([1, 1, 4]));
}

#[test]
fn inline_json_and_text_output() {
    let out = cli(&["exactlin", "det", "--matrix", "[[1, 2], [3, 4]]"]);
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.contains("det: -2"), "{}", out.stdout);
    let out = cli(&["embed", "--target", "[[2]]", "--rows", "3"]);
    assert_eq!(out.exit_code, 0);
    let (_, v) = json(&["embed", "--target", "[[2]]", "--rows", "3", "--no-zero-rows"]);
    assert_eq!(v["results"]["classes"], 0);
    let (_, v) = json(&["embed", "--target", "[[2]]", "--rows", "3"]);
    assert_eq!(v["results"]["classes"], 1);
}

#[test]
fn verdict_failure_exits_one() {
    let (code, v) = json(&["qform", "min", "--form", "[[2, 1], [1, 2]]", "--expect", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdicts"][0]["pass"], false);
    let (code, _) = json(&["paction", "regular", "--action", "klein_four_full_aut"]);
    assert_eq!(code, 1);
    // The minimum criterion is too weak here; the weighted bound is needed.
    let (code, v) = json(&["block", "kbcheck", "--cartan", "cartan_e21_d8", "--d-order", "8"]);
    assert_eq!((code, &v["results"]["minimum"]), (1, &Value::from(4)));
    let (code, _) = json(&["block", "kbcheck", "--cartan", "[[4]]", "--d-order", "8"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(cli(&[]).exit_code, 2);
    assert_eq!(cli(&["qform", "frobnicate"]).exit_code, 2);
    assert_eq!(cli(&["--budget", "lots", "verify"]).exit_code, 2);
    let out = cli(&["exactlin", "snf", "--matrix", "[[1, 2], [3,]]"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("line 1, column"), "{}", out.stderr);
    let out = cli(&["qform", "min", "--form", "{\"matrix\": [[2, 1], [1, \"x\"]]}"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("$.matrix[1][1]"), "{}", out.stderr);
    assert_eq!(cli(&["exactlin", "det", "--matrix", "no_such_fixture"]).exit_code, 2);
    // Full automorphism group of the Klein four group has even order.
    assert_eq!(
        cli(&[
            "block",
            "goodelem",
            "--action",
            "klein_four_full_aut",
            "--threshold",
            "2"
        ])
        .exit_code,
        2
    );
}

#[test]
fn help_exits_zero() {
    let out = cli(&["--help"]);
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.contains("verify"));
}

#[test]
fn exhausted_budget_exits_three() {
    let out = cli(&[
        "--budget",
        "10",
        "embed",
        "--target",
        "[[4, 1, 1], [1, 4, 1], [1, 1, 4]]",
    ]);
    assert_eq!(out.exit_code, 3, "{}", out.stderr);
    let out = cli(&["--budget", "5", "qform", "min", "--form", "e6_type_scaled_inverse"]);
    assert_eq!(out.exit_code, 3, "{}", out.stderr);
}

#[test]
fn json_round_trips_byte_identically() {
    for args in [
        vec![
            "--json",
            "qform",
            "bound",
            "--weight",
            "weight_e21",
            "--cartan",
            "cartan_e21_d8",
        ],
        vec!["--json", "paction", "orbits", "--action", "z2squared_z3"],
        vec!["--json", "block", "inventory", "--scenario", "z2cubed_f21"],
        vec![
            "--json",
            "qform",
            "min",
            "--form",
            "{\"matrix\": [[3, 1], [1, 3]], \"scale\": \"123456789012345678901234567/2\"}",
        ],
    ] {
        let out = cli(&args);
        let report = RunReport::from_json(&out.stdout).unwrap();
        assert_eq!(report.to_json(), out.stdout);
    }
}

#[test]
fn payload_is_deterministic() {
    let a = json(&["block", "enumerate", "--scenario", "z2cubed_f21"]).1;
    let b = json(&["--seedless", "block", "enumerate", "--scenario", "z2cubed_f21"]).1;
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn suite_skips_extended_check_by_default() {
    let (code, v) = json(&["verify", "--check", "6", "--check", "9"]);
    assert_eq!(code, 0);
    let checks = v["results"]["checks"].as_array().unwrap();
    assert_eq!(checks[0]["status"], "PASS");
    assert_eq!(checks[1]["status"], "SKIP");
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 1);
}

#[test]
fn small_budget_skips_extended_check() {
    let (code, v) = json(&["--budget", "1000", "verify", "--check", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["checks"][0]["status"], "SKIP");
}

fn copy_fixtures(to: &Path) {
    let from = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(from).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
    }
}

#[test]
fn tampered_fixture_fails_its_check() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    let path = dir.path().join("e6_type.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["matrix"][0][0] = 4.into();
    std::fs::write(&path, v.to_string()).unwrap();
    let bin = env!("CARGO_BIN_EXE_cartankit");
    let out = Command::new(bin)
        .args(["verify", "--check", "1", "--check", "5"])
        .env("CARTANKIT_FIXTURES", dir.path())
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(1), "{text}");
    assert!(text.contains("FAIL 1:"), "{text}");
    assert!(text.contains("PASS 5:"), "{text}");
    let clean = Command::new(bin).args(["verify", "--check", "1"]).output().unwrap();
    assert_eq!(clean.status.code(), Some(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Arbitrary text as a matrix argument never panics and never succeeds silently.
    #[test]
    fn malformed_matrix_text_exits_two(s in "[\\[\\]{}0-9,\" a-z:-]{0,24}") {
        let arg = format!("[{s}");
        let out = cli(&["exactlin", "snf", "--matrix", &arg]);
        prop_assert!(out.exit_code == 0 || out.exit_code == 2);
        if out.exit_code == 2 {
            prop_assert!(out.stderr.starts_with("error: "));
        }
    }

    /// Ragged or non-numeric matrices are rejected with exit code 2.
    #[test]
    fn ragged_matrices_exit_two(a in 1usize..4, b in 1usize..4, bad in any::<bool>()) {
        prop_assume!(a != b || bad);
        let row = |n: usize| format!("[{}]", vec!["1"; n].join(","));
        let second = if bad { "[\"q\"]".to_string() } else { row(b) };
        let arg = format!("[{},{}]", row(a), second);
        prop_assert_eq!(cli(&["exactlin", "det", "--matrix", &arg]).exit_code, 2);
    }
}
