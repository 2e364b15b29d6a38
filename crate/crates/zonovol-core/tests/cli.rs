//! End-to-end tests of the `zonovol` binary: output determinism, exit
//! codes on good and malformed inputs, and the fixture anchors.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn zonovol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonovol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn mixedvol_orthogonal_segments() {
    let out = zonovol(&[
        "mixedvol",
        "--bodies",
        &fixture("orth_segments_2d.json"),
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("0.500000000000\n"), "{text}");
    assert!(text.contains("agreement:"), "{text}");
}

#[test]
fn mixedvol_thm13_instance() {
    let out = zonovol(&[
        "mixedvol",
        "--bodies",
        &fixture("thm13_segment_ball_segment.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("0.333333333333\n"));
}

#[test]
fn check_conj11_sixty_degrees() {
    let out = zonovol(&[
        "check",
        "--bodies",
        &fixture("segments_60deg.json"),
        "--inequality",
        "CONJ_1_1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("epsilon: 0.154700538379"), "{text}");
    assert!(text.contains("holds: true"), "{text}");
}

#[test]
fn check_thm13_equality() {
    let out = zonovol(&[
        "check",
        "--bodies",
        &fixture("thm13_segment_ball_segment.json"),
        "--inequality",
        "THM_1_3",
        "--gamma",
        "1",
        "--beta",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("equality_within: true"), "{text}");
}

#[test]
fn json_output_is_deterministic_and_roundtrips() {
    let args = [
        "check",
        "--bodies",
        &fixture("segments_60deg.json"),
        "--inequality",
        "CONJ_1_1",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = zonovol(&args);
    let b = zonovol(&args);
    assert_eq!(out_bytes(&a), out_bytes(&b), "same seed, same bytes");

    // Parse then re-serialize: byte identical (insertion-ordered values).
    let text = stdout(&a);
    let value: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    let again = serde_json::to_string(&value).unwrap();
    assert_eq!(text.trim(), again);

    let mc_args = [
        "intrinsics",
        "--bodies",
        &fixture("square_rot_square.json"),
        "--mc-samples",
        "500",
        "--seed",
        "11",
        "--format",
        "json",
    ];
    let a = zonovol(&mc_args);
    let b = zonovol(&mc_args);
    assert_eq!(out_bytes(&a), out_bytes(&b), "monte carlo path deterministic");
}

fn out_bytes(out: &Output) -> &[u8] {
    &out.stdout
}

#[test]
fn exit_codes_on_malformed_corpus() {
    for name in [
        "malformed/bad_syntax.json",
        "malformed/wrong_dim.json",
        "malformed/dup_names.json",
        "malformed/bad_ball.json",
        "malformed/unknown_kind.json",
    ] {
        let out = zonovol(&[
            "mixedvol",
            "--bodies",
            &fixture(name),
        ]);
        assert_eq!(out.status.code(), Some(1), "fixture {name}");
        assert!(!out.stderr.is_empty(), "fixture {name} should explain itself");
    }
    // Missing file is also a parse error.
    let out = zonovol(&["mixedvol", "--bodies", "/nonexistent/nothing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_code_applicability() {
    // Multiplicities that do not sum to the dimension.
    let out = zonovol(&[
        "mixedvol",
        "--bodies",
        &fixture("orth_segments_2d.json"),
        "--mult",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // THM_1_4 with a first multiplicity above one.
    let out = zonovol(&[
        "check",
        "--bodies",
        &fixture("square_rot_square.json"),
        "--inequality",
        "THM_1_4",
        "--mult",
        "2,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_zonovol"))
        .args([
            "mixedvol",
            "--bodies",
            &fixture("orth_segments_2d.json"),
            "--oracle",
        ])
        .env("ZONOVOL_BUDGET", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fuzz_run_all_hold() {
    let out = zonovol(&[
        "check",
        "--bodies",
        &fixture("orth_segments_2d.json"),
        "--inequality",
        "CONJ_1_1",
        "--fuzz",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all hold"));
}

#[test]
fn stability_certificate_and_bracket() {
    let out = zonovol(&[
        "stability",
        "certificate",
        "--theorem",
        "THM_1_5",
        "--bodies",
        &fixture("segments_89deg.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["theorem_id"], "THM_1_5");
    assert_eq!(v["holds"], true);
    for key in [
        "epsilon",
        "recovered_subspaces",
        "bracket_value",
        "bracket_bound",
        "containment_slacks",
        "theorem_id",
        "holds",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let out = zonovol(&[
        "bracket",
        "--bodies",
        &fixture("segments_60deg.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0.866025403784"));
}

#[test]
fn stability_lemma52_table() {
    let out = zonovol(&["stability", "lemma52", "--n", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("holds").count(), 50);
    assert!(!text.contains("VIOLATED"));
}

#[test]
fn zonolate_equality_fixture() {
    let out = zonovol(&[
        "check",
        "--bodies",
        &fixture("zonolate_orth_3d.json"),
        "--inequality",
        "ZONOLATE",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["equality_within"], true);
    assert_eq!(v["inequality_id"], "ZONOLATE");
}

#[test]
fn intrinsics_cube_text() {
    let out = zonovol(&["intrinsics", "--bodies", &fixture("cube_3d.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("cube V_0 = 1.00000000000"), "{text}");
    assert!(text.contains("cube V_1 = 3.00000000000"), "{text}");
    assert!(text.contains("cube V_2 = 3.00000000000"), "{text}");
    assert!(text.contains("cube V_3 = 1.00000000000"), "{text}");
}
