use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

fn rcldpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcldpc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = rcldpc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// construct → puncture → simulate (JSON) → report (CSV); returns the CSV.
fn pipeline(dir: &Path, workers: &str) -> String {
    let code = dir.join("small.alist");
    let pattern = dir.join("small.ace.json");
    let sim = dir.join("sim.json");
    let csv = dir.join("sim.csv");
    ok(&[
        "--workers",
        workers,
        "construct",
        "--config",
        s(&data("data/small.json")),
        "--out",
        s(&code),
    ]);
    ok(&[
        "--workers",
        workers,
        "puncture",
        "--code",
        s(&code),
        "--scheme",
        "ace",
        "--target-rate",
        "5/8",
        "--out",
        s(&pattern),
    ]);
    ok(&[
        "--workers",
        workers,
        "simulate",
        "--code",
        s(&code),
        "--pattern",
        s(&pattern),
        "--snr-grid",
        "1:1:3",
        "--max-frames",
        "200",
        "--stop-frame-errors",
        "20",
        "--max-iters",
        "30",
        "--seed",
        "11",
        "--format",
        "json",
        "--out",
        s(&sim),
    ]);
    ok(&[
        "--workers",
        workers,
        "report",
        "--input",
        s(&sim),
        "--out",
        s(&csv),
    ]);
    std::fs::read_to_string(csv).unwrap()
}

#[test]
fn construct_writes_code_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("codes/small.alist");
    let stdout = ok(&[
        "construct",
        "--config",
        s(&data("data/small.json")),
        "--out",
        s(&code),
    ]);
    assert!(stdout.contains("N=200 M=100"), "{stdout}");
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("codes/small.report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["summary"]["rank"], 100);
    let manifest = std::fs::read_to_string(dir.path().join("codes/rcldpc-manifest.json")).unwrap();
    assert!(manifest.contains("\"small.alist\"") && manifest.contains("\"small.report.json\""));
}

#[test]
fn ace_puncturing_of_a_regular_code_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("regular.alist");
    ok(&[
        "construct",
        "--config",
        s(&data("data/regular.json")),
        "--out",
        s(&code),
    ]);
    let out = rcldpc(&[
        "puncture",
        "--code",
        s(&code),
        "--scheme",
        "ace",
        "--count",
        "10",
        "--out",
        s(&dir.path().join("p.json")),
    ]);
    assert_eq!(out.status.code(), Some(5));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error[unsupported]: "), "{stderr}");
    assert_eq!(stderr.trim_end().lines().count(), 1);
}

#[test]
fn exit_codes_by_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("small.alist");
    ok(&[
        "construct",
        "--config",
        s(&data("data/small.json")),
        "--out",
        s(&code),
    ]);

    let usage = rcldpc(&["puncture", "--code", s(&code)]);
    assert_eq!(usage.status.code(), Some(2));

    let config = rcldpc(&[
        "puncture",
        "--code",
        s(&code),
        "--scheme",
        "cc",
        "--target-rate",
        "1/4",
        "--out",
        "x.json",
    ]);
    assert_eq!(config.status.code(), Some(3));

    let missing = rcldpc(&[
        "analyze",
        "--code",
        s(&dir.path().join("absent.alist")),
        "--out",
        "x.json",
    ]);
    assert_eq!(missing.status.code(), Some(6));

    std::fs::write(
        &code,
        std::fs::read_to_string(&code)
            .unwrap()
            .replacen('1', "2", 1),
    )
    .unwrap();
    let tampered = rcldpc(&[
        "analyze",
        "--code",
        s(&code),
        "--out",
        s(&dir.path().join("c.json")),
    ]);
    assert_eq!(tampered.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&tampered.stderr).contains("manifest"));
}

#[test]
fn pipeline_matches_golden_csv_for_any_worker_count() {
    let golden = std::fs::read_to_string(data("golden/pipeline.csv")).unwrap();
    for workers in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(pipeline(dir.path(), workers), golden, "workers = {workers}");
    }
}

#[test]
fn extension_ladder_feeds_simulation_and_throughput() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("small.alist");
    let ladder = dir.path().join("ladder");
    ok(&[
        "construct",
        "--config",
        s(&data("data/small.json")),
        "--out",
        s(&code),
    ]);
    let stdout = ok(&[
        "extend",
        "--code",
        s(&code),
        "--levels",
        "1/3",
        "--scheme",
        "cc",
        "--out",
        s(&ladder),
    ]);
    assert!(stdout.contains("1/3: level 1"), "{stdout}");
    let sim = dir.path().join("level.csv");
    ok(&[
        "simulate",
        "--ladder",
        s(&ladder),
        "--rate",
        "1/3",
        "--snr-grid",
        "inf",
        "--max-frames",
        "5",
        "--out",
        s(&sim),
    ]);
    let csv = std::fs::read_to_string(&sim).unwrap();
    assert!(
        csv.lines().nth(1).unwrap().starts_with("inf,5,0,0,"),
        "{csv}"
    );

    let pattern = dir.path().join("p.json");
    ok(&[
        "puncture",
        "--code",
        s(&code),
        "--scheme",
        "cc",
        "--count",
        "40",
        "--out",
        s(&pattern),
    ]);
    let out = dir.path().join("t.json");
    ok(&[
        "throughput",
        "--code",
        s(&code),
        "--pattern",
        s(&pattern),
        "--punctures",
        "40,20",
        "--ladder",
        s(&ladder),
        "--snr-grid",
        "-2,inf",
        "--frames",
        "10",
        "--format",
        "json",
        "--out",
        s(&out),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["stages"].as_array().unwrap().len(), 4);
    assert_eq!(report["points"][1]["throughput"], 0.625);
    let csv = dir.path().join("t.csv");
    ok(&["report", "--input", s(&out), "--out", s(&csv)]);
    assert!(std::fs::read_to_string(csv)
        .unwrap()
        .starts_with("es_n0_db,"));
}
