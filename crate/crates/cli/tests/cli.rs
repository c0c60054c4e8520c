use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("verify runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn full_run_reports_no_mismatch() {
    let out = verify(&["--all", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["summary"]["mismatch"], 0);
    let steps = report["steps"].as_array().unwrap();
    assert!(steps.len() >= 45);
    let eb = steps.iter().find(|s| s["id"] == "E.B").unwrap();
    assert_eq!(eb["status"], "SKIPPED");
}

#[test]
fn single_step() {
    let out = verify(&["--step", "A.F30", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let steps = report["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["status"], "MATCH_UP_TO_SCALAR");
    assert_eq!(steps[0]["scalar"], "1/4608");
}

#[test]
fn filter_selects_by_glob() {
    let out = verify(&["--filter", "L31.*"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("L31.")).count(), 8);
    assert!(!text.contains("E.11"));
}

#[test]
fn list_shows_ids() {
    let out = verify(&["--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("A.F30 ")));
    assert!(text.lines().count() >= 45);
}

#[test]
fn input_errors_exit_3() {
    let dir = std::env::temp_dir().join("biharm-verify-no-such-corpus");
    assert_eq!(verify(&["--all", "--corpus", dir.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(verify(&["--step", "X.nope"]).status.code(), Some(3));
    assert_eq!(verify(&["--filter", "[", "--report", "json"]).status.code(), Some(3));
    assert_eq!(verify(&[]).status.code(), Some(3));
    assert_eq!(verify(&["--term-cap", "5"]).status.code(), Some(3));
}

#[test]
fn corpus_directory_matches_embedded() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus");
    let a = verify(&["--all", "--report", "json", "--corpus", dir]);
    let b = verify(&["--all", "--report", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_are_deterministic() {
    let a = verify(&["--all", "--report", "json", "--jobs", "4"]);
    let b = verify(&["--all", "--report", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_to_file() {
    let path = std::env::temp_dir().join(format!("biharm-verify-report-{}.json", std::process::id()));
    let out = verify(&["--step", "E.D", "--report", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["steps"][0]["id"], "E.D");
    std::fs::remove_file(path).ok();
}
