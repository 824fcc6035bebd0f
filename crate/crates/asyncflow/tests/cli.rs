use std::path::PathBuf;
use std::process::{Command, Output};

use asyncflow::parse_model;
use asyncflow::report::VerdictReport;

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model(name: &str) -> String {
    models().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asyncflow")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_anchor_state() {
    let o = run(&["check", &model("origin-jump.model"), "--property", "p-independent"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("p-independent: true (anchor-state)"), "{out}");
    assert!(out.contains("states: 00"), "{out}");
}

#[test]
fn check_constant_and_toggle() {
    let o = run(&["check", &model("constant.model"), "--property", "n-independent"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n-independent: true"));
    let o = run(&[
        "check",
        &model("toggle-second.model"),
        "--property",
        "atemporal-n-separated",
        "--mu",
        "00",
        "--mu2",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("atemporal-n-separated(00,10): true"), "{}", stdout(&o));
}

#[test]
fn false_verdicts_exit_zero_and_unknown_exits_three() {
    let o = run(&["check", &model("constant.model"), "--property", "n-dependent"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(": false"));
    let o = run(&["check", &model("constant.model"), "--property", "weak-n-separated", "--mu", "00", "--mu2", "11"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("unknown (ambiguous-definition)"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let o = run(&["check", &model("constant.model"), "--property", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown property"));
    assert!(stdout(&o).is_empty());
    let o = run(&["check", &model("constant.model"), "--property", "agree"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model");
    std::fs::write(&bad, "n=2\ny1 = x1 x2\ny2 = 1\n").unwrap();
    let o = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.model: 2:9: juxtaposition"), "{}", stderr(&o));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_report_replays() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = run(&[
        "check",
        &model("corner-swap.model"),
        "--property",
        "set-transitive",
        "--set",
        "00,11",
        "--mode",
        "strong-p",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: VerdictReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!((r.schema_version, r.verdict.as_str(), r.model.as_str()), (1, "true", "corner-swap"));
    assert_eq!(r.witness.as_ref().unwrap().schedule.as_ref().unwrap().period, "11");
    let phi = parse_model(&std::fs::read_to_string(model("corner-swap.model")).unwrap()).unwrap().function;
    assert!(r.verdict().unwrap().witness.unwrap().replays(&phi));
}

#[test]
fn analyze_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("all.json");
    let o = run(&["analyze", &model("toggle-second.model"), "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let reports: Vec<VerdictReport> = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(reports.len(), stdout(&o).lines().count());
    assert!(stdout(&o).contains("n-dependent\ttrue"));
}

#[test]
fn flow_and_portrait() {
    let o = run(&[
        "flow",
        &model("corner-swap.model"),
        "--mu",
        "00",
        "--schedule",
        &model("full.schedule"),
        "--t",
        "2.5",
        "--orbit",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "11\norbit: 00 11\n");
    let o =
        run(&["flow", &model("corner-swap.model"), "--mu", "00", "--schedule", &model("full.schedule"), "--t", "-1"]);
    assert_eq!(stdout(&o), "00\n");
    let o = run(&["portrait", &model("toggle-second.model")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("s00 -> s01 [label=\"2\"];"));
}

#[test]
fn oracle_subcommand() {
    let o = run(&["oracle", &model("toggle-second.model"), "--property", "n-dependent", "--depth", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("n-dependent: true"));
}

#[test]
fn conjugacy_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let swapped = dir.path().join("swapped.model");
    std::fs::write(&swapped, "n=2\ny1 = !x1\ny2 = x2\n").unwrap();
    let o = run(&["conjugacy", &model("toggle-second.model"), swapped.to_str().unwrap(), "--search"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("conjugate: true"), "{out}");
    let h = dir.path().join("h.perm");
    std::fs::write(&h, "00 -> 00\n10 -> 01\n01 -> 10\n11 -> 11\n").unwrap();
    let hs = h.to_str().unwrap();
    let o = run(&["conjugacy", &model("toggle-second.model"), swapped.to_str().unwrap(), "--H", hs, "--Hprime", hs]);
    assert_eq!(stdout(&o), "conjugate: true\n");
    let o = run(&["conjugacy", &model("toggle-second.model"), &model("origin-jump.model"), "--search"]);
    assert_eq!(stdout(&o), "conjugate: false\n");
    let o = run(&["conjugacy", &model("toggle-second.model"), swapped.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_resumes_from_torn_csv() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let o = run(&["census", "--n", "2", "--csv", full.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary_full = stdout(&o);
    assert!(summary_full.contains("\"complete\": true"));
    let o = run(&["census", "--n", "2", "--csv", part.to_str().unwrap(), "--limit", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("\"complete\": false"));
    // Simulate an interruption in the middle of a row.
    let mut text = std::fs::read_to_string(&part).unwrap();
    text.push_str("100,0,1");
    std::fs::write(&part, text).unwrap();
    let o = run(&["census", "--n", "2", "--resume", part.to_str().unwrap(), "--limit", "56"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["census", "--n", "2", "--resume", part.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), summary_full);
    assert_eq!(std::fs::read(&part).unwrap(), std::fs::read(&full).unwrap());
}
