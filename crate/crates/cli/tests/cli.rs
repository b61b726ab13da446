use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

fn qdecomp() -> Command {
    let mut cmd = Command::cargo_bin("qdecomp").unwrap();
    cmd.env_remove("QDECOMP_CACHE");
    cmd
}

fn stdout_of(args: &[&str]) -> String {
    let out = qdecomp().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn column_text() {
    qdecomp()
        .args(["column", "--n", "2", "--mu", "(2)"])
        .assert()
        .success()
        .stdout("(2): 1\n(1,1): q\n");
    qdecomp()
        .args(["column", "--n", "3", "--mu", "()"])
        .assert()
        .success()
        .stdout("(): 1\n");
}

#[test]
fn column_rejects_bad_partition() {
    qdecomp()
        .args(["column", "--n", "2", "--mu", "(1,2)"])
        .assert()
        .failure()
        .stderr(predicate::str::contains("weakly decreasing"));
}

#[test]
fn column_json_is_ordered() {
    let v: Value =
        serde_json::from_str(&stdout_of(&["column", "--n", "2", "--mu", "(3,1)", "--format", "json"])).unwrap();
    let labels: Vec<&Value> = v["entries"].as_array().unwrap().iter().map(|e| &e[0]).collect();
    let mut sorted = labels.clone();
    sorted.sort_by(|a, b| {
        let key = |x: &Value| {
            x.as_array()
                .unwrap()
                .iter()
                .map(|y| y.as_u64().unwrap())
                .collect::<Vec<_>>()
        };
        key(b).cmp(&key(a))
    });
    assert_eq!(labels, sorted);
    assert_eq!(v["entries"][0][1], serde_json::json!([[0, 1]]));
}

#[test]
fn dmatrix_formats() {
    assert_eq!(
        stdout_of(&["dmatrix", "--n", "2", "--size", "2", "--format", "csv"]),
        "lambda\\mu,\"(2)\",\"(1,1)\"\n\"(2)\",1,0\n\"(1,1)\",q,1\n"
    );
    let v: Value =
        serde_json::from_str(&stdout_of(&["dmatrix", "--n", "3", "--size", "0", "--format", "json"])).unwrap();
    assert_eq!(v["labels"], serde_json::json!([[]]));
    assert_eq!(v["entries"], serde_json::json!([[[[0, 1]]]]));
    let tex = stdout_of(&["dmatrix", "--n", "2", "--size", "3", "--format", "latex"]);
    assert!(tex.starts_with("\\begin{tabular}{c|ccc}\n"));
    assert!(tex.ends_with("\\end{tabular}\n"));
    assert_eq!(tex.matches("\\\\\n").count(), 4);
}

#[test]
fn abacus_figures() {
    let text = stdout_of(&[
        "abacus",
        "--n",
        "9",
        "--mu",
        "(13,12,10,8,8,8,6,5,5,3,2,1,1)",
        "--s",
        "14",
        "--rows",
        "-2..2",
    ]);
    let expected = concat!(
        "    0 1 2 3 4 5 6 7 8\n",
        "-2  o o o o o o o o o\n",
        "-1  o o o o o o o o o\n",
        " 0  o . o o . o . o .\n",
        " 1  . o o . o . . o o\n",
        " 2  o . . o . . o . o\n",
    );
    assert_eq!(text, expected);
    let text = stdout_of(&[
        "abacus",
        "--n",
        "9",
        "--mu",
        "(13,12,10,8,8,8,6,5,5,3,2,1,1)",
        "--s",
        "14",
        "--runners",
        "4,2,3",
        "--rows",
        "-2..2",
    ]);
    assert!(text.lines().all(|l| l.matches(" | ").count() == 2));
    assert_eq!(
        stdout_of(&["abacus", "--n", "3", "--mu", "()"]),
        "    0 1 2\n-1  o o o\n 0  . . .\n"
    );
    qdecomp()
        .args(["abacus", "--n", "9", "--mu", "(1)", "--runners", "4,2"])
        .assert()
        .failure();
}

#[test]
fn verify_passing_suites() {
    for args in [
        ["verify", "--suite", "relations", "--n", "2", "--max-size", "6"],
        ["verify", "--suite", "runner", "--n", "4", "--max-size", "6"],
        ["verify", "--suite", "lbt", "--n", "3", "--max-size", "5"],
    ] {
        let v: Value = serde_json::from_str(&stdout_of(&args)).unwrap();
        assert_eq!(v["passed"], Value::Bool(true), "{args:?}");
        assert!(v["instances_checked"].as_u64().unwrap() > 0);
    }
}

#[test]
fn verify_fk_reports_column_shape_clauses() {
    let out = qdecomp()
        .args(["verify", "--suite", "fk", "--max-size", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures
        .iter()
        .all(|f| f["clause"] == "monomial" || f["clause"] == "count"));
}

#[test]
fn verify_unknown_suite() {
    qdecomp().args(["verify", "--suite", "nope"]).assert().failure();
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cols.json");
    let f = file.to_str().unwrap();
    let warm: Value = serde_json::from_str(&stdout_of(&[
        "cache",
        "--file",
        f,
        "warm",
        "--n",
        "2,3",
        "--max-size",
        "5",
    ]))
    .unwrap();
    assert!(warm["computed"].as_u64().unwrap() > 0);
    let first = std::fs::read_to_string(&file).unwrap();

    let again: Value = serde_json::from_str(&stdout_of(&[
        "cache",
        "--file",
        f,
        "warm",
        "--n",
        "2,3",
        "--max-size",
        "5",
    ]))
    .unwrap();
    assert_eq!(again["computed"], 0);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), first);
    assert_eq!(stdout_of(&["cache", "--file", f, "export"]), first);

    let stats: Value = serde_json::from_str(&stdout_of(&["cache", "--file", f, "stats"])).unwrap();
    assert_eq!(stats["max_size"], 5);
    assert_eq!(stats["version"], "qdecomp-cache/1");

    let cold = stdout_of(&["dmatrix", "--n", "3", "--size", "5", "--format", "json"]);
    let warmed = stdout_of(&["--cache", f, "dmatrix", "--n", "3", "--size", "5", "--format", "json"]);
    assert_eq!(cold, warmed);
    let via_env = qdecomp()
        .env("QDECOMP_CACHE", f)
        .args(["dmatrix", "--n", "3", "--size", "5", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), cold);
}

#[test]
fn cache_refuses_wrong_version() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\"entries\":[],\"version\":\"qdecomp-cache/0\"}\n").unwrap();
    qdecomp()
        .args(["cache", "--file", file.to_str().unwrap(), "stats"])
        .assert()
        .failure()
        .stderr(predicate::str::contains("cache version"));
    qdecomp()
        .args(["--cache", file.to_str().unwrap(), "column", "--n", "2", "--mu", "(1)"])
        .assert()
        .failure();
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["dmatrix", "--n", "2", "--size", "6", "--format", "json"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}
