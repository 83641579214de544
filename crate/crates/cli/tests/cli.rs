use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rbcsp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbcsp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn rbcsp")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn gen(dir: &Path, n: &str, seed: &str) {
    ok(&rbcsp(&["gen", "--n", n, "--seed", seed, "--forced", "--out", "inst.csp"], dir));
}

#[test]
fn gen_then_solve_reports_success() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "15", "4");
    let text = std::fs::read_to_string(dir.path().join("inst.csp")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("p bcsp 15 9 ")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("s ")));

    let out = ok(&rbcsp(&["solve", "--in", "inst.csp", "--seed", "2", "--stats"], dir.path()));
    let rec: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rec["success"], true);
    assert_eq!(rec["best_conflicts"], 0);
    assert_eq!(rec["witness"]["kind"], "full");
    assert_eq!(rec["witness"]["assignment"].as_array().unwrap().len(), 15);
    assert!(rec["stats"]["iterations"].is_u64());

    let again = ok(&rbcsp(&["solve", "--in", "inst.csp", "--seed", "2"], dir.path()));
    let rec2: Value = serde_json::from_str(again.trim()).unwrap();
    assert_eq!(rec2["iterations"], rec["iterations"]);
    assert!(rec2["stats"].is_null());
}

#[test]
fn solve_with_target_returns_partial_witness() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "20", "7");
    let out = ok(&rbcsp(&["solve", "--in", "inst.csp", "--seed", "1", "--target", "18"], dir.path()));
    let rec: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rec["success"], true);
    let kind = rec["witness"]["kind"].as_str().unwrap();
    if kind == "partial" {
        assert_eq!(rec["witness"]["subset"].as_array().unwrap().len(), 18);
    } else {
        assert_eq!(kind, "full");
    }
}

#[test]
fn convert_round_trip_preserves_instance() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "12", "9");
    ok(&rbcsp(&["convert", "--to-mis", "--in", "inst.csp", "--out", "g.dimacs"], dir.path()));
    let graph = std::fs::read_to_string(dir.path().join("g.dimacs")).unwrap();
    assert!(graph.starts_with("p edge 84 "), "{}", &graph[..40.min(graph.len())]);
    ok(&rbcsp(&["convert", "--to-csp", "--block-size", "7", "--in", "g.dimacs", "--out", "back.csp"], dir.path()));
    ok(&rbcsp(&["recover", "g.dimacs", "--d", "7", "--out", "rec.csp"], dir.path()));
    let back = std::fs::read_to_string(dir.path().join("back.csp")).unwrap();
    let rec = std::fs::read_to_string(dir.path().join("rec.csp")).unwrap();
    let p = |t: &str| t.lines().find(|l| l.starts_with("p ")).unwrap().to_string();
    assert!(p(&back).starts_with("p bcsp 12 7 "));
    assert_eq!(p(&back), p(&rec));

    // the recovered instance converts back to the same graph
    ok(&rbcsp(&["convert", "--to-mis", "--in", "back.csp", "--out", "g2.dimacs"], dir.path()));
    let graph2 = std::fs::read_to_string(dir.path().join("g2.dimacs")).unwrap();
    assert_eq!(graph, graph2);
}

#[test]
fn bench_writes_summary_and_csvs() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "15", "2");
    ok(&rbcsp(
        &[
            "bench", "--in", "inst.csp", "--runs", "8", "--base-seed", "5", "--rtd-out", "rtd.csv",
            "--hist-out", "hist.csv", "--summary-out", "summary.json",
        ],
        dir.path(),
    ));
    let rtd = std::fs::read_to_string(dir.path().join("rtd.csv")).unwrap();
    assert_eq!(rtd.lines().next(), Some("iterations,ecdf,fitted"));
    assert_eq!(rtd.lines().count(), 9);
    let hist = std::fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    assert_eq!(hist.lines().collect::<Vec<_>>(), vec!["conflicts,runs", "0,8"]);
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["summary"]["runs"], 8);
    assert_eq!(summary["summary"]["successes"], 8);
    assert_eq!(summary["base_seed"], 5);
    assert_eq!(summary["iterations"].as_array().unwrap().len(), 8);
}

#[test]
fn missing_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcsp(&["solve", "--in", "absent.csp"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("absent.csp"), "{err}");
}

#[test]
fn malformed_input_reports_a_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csp"), "p bcsp 2 2 1\nk 0 5 1\nf 0 0\n").unwrap();
    let out = rbcsp(&["solve", "--in", "bad.csp"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["gen", "--n", "5", "--bogus"][..],
        &["convert", "--in", "x"],
        &["convert", "--to-csp", "--in", "x"],
        &["convert", "--to-mis", "--to-csp", "--block-size", "3", "--in", "x"],
        &["solve", "--in", "x", "--conflict-cap", "3"],
    ] {
        let out = rbcsp(args, dir.path());
        assert!(!out.status.success(), "{args:?} accepted");
    }
}

#[test]
fn version_names_the_generator() {
    let out = ok(&rbcsp(&["--version"], Path::new(".")));
    assert!(out.contains("chacha8"), "{out}");
}
