use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn eccsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eccsim"))
        .args(args)
        .output()
        .expect("spawn eccsim")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn generate_path_to_stdout() {
    let o = eccsim(&["generate", "path", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# nodes=11 edges=10 diameter=10 radius=5 centers=5"), "{header}");
    let edges: Vec<&str> = lines.collect();
    assert_eq!(edges.len(), 10);
    assert_eq!(edges[0], "0 1");
}

#[test]
fn generate_to_file_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let o = eccsim(&["generate", "t", "5", "5", "4", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("nodes=15 edges=14 diameter=10"));
    let body = fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().filter(|l| !l.starts_with('#')).count(), 14);

    let o = eccsim(&["run", "--edges", path.to_str().unwrap(), "--wake", "14:0", "--probe", "14"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["detection"]["diam"]["14"], 29);
    assert_eq!(summary["graph"]["diameter"], 10);
}

#[test]
fn generate_rejects_bad_parameters() {
    for args in [
        &["generate", "path", "1"][..],
        &["generate", "random", "10", "1.5", "0"],
        &["generate", "star", "4"],
        &["generate", "t", "1", "2"],
    ] {
        let o = eccsim(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with("eccsim: error:"), "{err}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn run_path_eleven_matches_golden_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let summary = dir.path().join("summary.json");
    let o = eccsim(&[
        "run",
        "--graph",
        "path:11",
        "--wake",
        "0:0",
        "--probe",
        "0,5,10",
        "--trace",
        trace.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/path11_trace.csv");
    assert_eq!(fs::read_to_string(trace).unwrap(), fs::read_to_string(golden).unwrap());

    let s: Value = serde_json::from_str(&fs::read_to_string(summary).unwrap()).unwrap();
    let det = &s["detection"];
    assert_eq!((det["ecc"]["0"].as_u64(), det["ecc"]["5"].as_u64()), (Some(22), Some(17)));
    assert_eq!(
        (det["diam"]["0"].as_u64(), det["diam"]["5"].as_u64(), det["diam"]["10"].as_u64()),
        (Some(31), Some(26), Some(21))
    );
    assert_eq!(s["rounds_executed"], 32);
    for node in ["0", "5", "10"] {
        assert_eq!(s["final_values"][node]["r"], 5);
        assert_eq!(s["final_values"][node]["d"], 10);
    }
    assert_eq!(s["accounting"]["bfs_link_tuples"], 220);
}

#[test]
fn trace_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let o = eccsim(&[
        "run", "--graph", "path:3", "--probe", "1", "--trace", "-", "--summary", summary.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("round,node,e,d,r,s,c,new_bfs,out_tuples\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("1")));

    let o = eccsim(&["run", "--graph", "path:3", "--trace", "-"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn two_node_synchronized_run() {
    let o = eccsim(&["run", "--graph", "path:2", "--wake", "all:0", "--variant", "sliding"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["variant"], "sliding-window");
    for node in ["0", "1"] {
        let v = &s["final_values"][node];
        assert_eq!((v["e"].as_u64(), v["d"].as_u64(), v["r"].as_u64()), (Some(1), Some(1), Some(1)));
    }
}

#[test]
fn run_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n1 1\n").unwrap();
    let split = dir.path().join("split.txt");
    fs::write(&split, "0 1\n2 3\n").unwrap();
    let missing = dir.path().join("missing.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--edges", bad.to_str().unwrap()],
        vec!["run", "--edges", split.to_str().unwrap()],
        vec!["run", "--edges", missing.to_str().unwrap()],
        vec!["run", "--graph", "path:5", "--wake", "9:0"],
        vec!["run", "--graph", "path:5", "--probe", "7"],
        vec!["run", "--graph", "path:5", "--max-rounds", "3"],
        vec!["run"],
    ];
    for args in cases {
        let o = eccsim(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
    let o = eccsim(&["run", "--edges", bad.to_str().unwrap()]);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn verify_single_graph() {
    let o = eccsim(&["verify", "--graph", "path:11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.is_object());

    let o = eccsim(&["verify", "--graph", "random:25,0.15,3", "--wake", "3:0,7:4,11:9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn verify_random_suite_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = eccsim(&[
        "verify", "--random", "50", "--max-n", "40", "--seed", "9", "--report", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!((r["cases"].as_u64(), r["passed"].as_u64(), r["failed"].as_u64()), (Some(50), Some(50), Some(0)));
}

#[test]
fn corrupted_runs_fail_verification() {
    for kind in ["diameter", "detection", "delivery", "origin", "traffic"] {
        let o = eccsim(&["verify", "--graph", "path:11", "--corrupt", kind]);
        assert_eq!(o.status.code(), Some(1), "{kind}");
        assert!(stderr(&o).starts_with("eccsim: verification failed:"), "{kind}: {}", stderr(&o));
    }
    let o = eccsim(&["verify", "--random", "5", "--seed", "1", "--corrupt", "origin"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["failed"], 5);
}
