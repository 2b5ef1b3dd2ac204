use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adhm-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Fresh directory holding the written corpus.
fn corpus_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("adhm-lab-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let o = run(&["examples", "--write", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    dir
}

fn path(dir: &PathBuf, file: &str) -> String {
    dir.join(file).to_str().unwrap().to_string()
}

#[test]
fn written_example_checks_as_solution() {
    let dir = corpus_dir("check");
    let o = run(&["check", "--data", &path(&dir, "p2_ideal_point.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("solution: true"), "{}", stdout(&o));

    let o = run(&["check", "--data", &path(&dir, "scroll.json"), "--variety", &path(&dir, "scroll_surface.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn falsified_claim_exits_one() {
    let dir = corpus_dir("falsified");
    let o = run(&["check", "--data", &path(&dir, "scroll.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("solution: false"), "{}", stdout(&o));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = corpus_dir("errors");
    let o = run(&["check", "--data", &path(&dir, "no_such_file.json")]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"c\": 1,\n \"r\": 1, \"d\": 0,,}").unwrap();
    let o = run(&["check", "--data", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    let ragged = dir.join("ragged.json");
    std::fs::write(
        &ragged,
        r#"{"c": 2, "r": 1, "d": 0, "A": [[[1, 0], [0]]], "B": [[[0, 0], [0, 0]]], "I": [[[1], [0]]], "J": [[[0, 0]]]}"#,
    )
    .unwrap();
    let o = run(&["check", "--data", ragged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("$.A[0][1]"), "{}", stderr(&o));

    let o = run(&["check", "--data", &path(&dir, "p2_ideal_point.json"), "--variety", &path(&dir, "p3.json")]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["--field", "fp:4", "check", "--data", &path(&dir, "p2_ideal_point.json")]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn field_declarations_must_agree() {
    let dir = corpus_dir("fields");
    let v7 = dir.join("p2_f7.json");
    std::fs::write(&v7, r#"{"n": 2, "generators": [], "field": "fp:7"}"#).unwrap();
    let data = path(&dir, "p2_ideal_point.json");
    let o = run(&["check", "--data", &data, "--variety", v7.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("field mismatch"), "{}", stderr(&o));

    let o = run(&["--field", "fp:7", "check", "--data", &data, "--variety", v7.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn strict_turns_inconclusive_into_exit_three() {
    let dir = corpus_dir("strict");
    let data = path(&dir, "c1_r2_p3.json");
    let o = run(&["--degree-bound", "0", "stability", "--data", &data]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["--strict", "--degree-bound", "0", "stability", "--data", &data]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["--strict", "stability", "--data", &data]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn moduli_dimension_report() {
    let o = run(&["moduli-dim", "--r", "2", "--d", "1", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dim M = 8, Jacobian full rank 5/5"), "{}", stdout(&o));

    let o = run(&["moduli-dim", "--r", "1", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("M is empty"), "{}", stdout(&o));
}

#[test]
fn json_output_parses() {
    let dir = corpus_dir("json");
    let o = run(&["--format", "json", "cohomology", "--data", &path(&dir, "p2_ideal_point.json"), "--classify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn thread_cap_is_validated() {
    let o = bin().args(["examples", "--verify"]).env("ADHM_LAB_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["examples", "--verify"]).env("ADHM_LAB_THREADS", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
