//! End-to-end checks of the command-line interface: outputs land on disk,
//! the catalog prints, and misuse exits with code 2.

use std::path::Path;
use std::process::{Command, Output};

fn dmmo(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dmmo"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("exp");
    let out = dmmo(
        &[
            "run",
            "--problem",
            "DMMF1",
            "--config",
            "C1",
            "--algorithm",
            "CAE-AN",
            "--runs",
            "2",
            "--seed",
            "7",
            "--pop-size",
            "20",
            "--num-changes",
            "3",
            "--out",
            out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["runs.csv", "curves.csv", "records.json", "summary.json"] {
        assert!(out_path.join(file).exists(), "{file} missing");
    }
    let rows = dmmo::io::read_runs_csv(&out_path.join("runs.csv")).unwrap();
    let run_ids: std::collections::BTreeSet<u32> = rows.iter().map(|r| r.run_id).collect();
    assert_eq!(run_ids.len(), 2, "two run records on disk");
    assert_eq!(rows.len(), 2 * 3);
}

#[test]
fn run_respects_dmmo_out_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("from-env");
    let out = dmmo(
        &[
            "run",
            "--problem",
            "DMMF1",
            "--algorithm",
            "DNSGA2-A",
            "--runs",
            "1",
            "--pop-size",
            "10",
            "--num-changes",
            "2",
        ],
        &[("DMMO_OUT", out_path.to_str().unwrap())],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_path.join("runs.csv").exists());
}

#[test]
fn list_problems_prints_twelve_rows() {
    let out = dmmo(&["list-problems"], &[]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows = text
        .lines()
        .filter(|l| l.starts_with("DMMF"))
        .count();
    assert_eq!(rows, 12);
    assert!(text.contains("DMMF12"));

    let json_out = dmmo(&["list-problems", "--json"], &[]);
    let descriptors: serde_json::Value =
        serde_json::from_str(&stdout(&json_out)).expect("valid JSON");
    assert_eq!(descriptors.as_array().unwrap().len(), 12);
}

#[test]
fn summarize_reads_back_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("exp");
    let run = dmmo(
        &[
            "run",
            "--problem",
            "DMMF1",
            "--algorithm",
            "CAE-AN",
            "--algorithm",
            "DNSGA2-A",
            "--runs",
            "2",
            "--pop-size",
            "10",
            "--num-changes",
            "2",
            "--out",
            out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(run.status.success());
    let sum_path = dir.path().join("sum");
    let out = dmmo(
        &[
            "summarize",
            "--input",
            out_path.join("runs.csv").to_str().unwrap(),
            "--out",
            sum_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(sum_path.join("summary.json").exists());
    assert!(stdout(&out).contains("DMMF1"));
}

#[test]
fn sweep_alpha_writes_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep");
    let out = dmmo(
        &[
            "sweep-alpha",
            "--problem",
            "DMMF7",
            "--runs",
            "2",
            "--pop-size",
            "10",
            "--num-changes",
            "2",
            "--out",
            out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_path.join("alpha_sweep.csv")).unwrap();
    // Nine alpha values, two runs each, plus the header.
    assert_eq!(text.lines().count(), 1 + 9 * 2);
    assert!(text.contains("0.9"));
}

#[test]
fn misuse_exits_with_code_two() {
    // Unknown flag (handled by the parser).
    let out = dmmo(&["run", "--problem", "DMMF1", "--no-such-flag"], &[]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown problem, config, and algorithm ids.
    let out = dmmo(&["run", "--problem", "DMMF99"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = dmmo(&["run", "--problem", "DMMF1", "--config", "C9"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = dmmo(
        &["run", "--problem", "DMMF1", "--algorithm", "NSGA-IX"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    // Missing input file is a runtime failure, not misuse.
    let out = dmmo(&["summarize", "--input", "/nonexistent/runs.csv"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("a");
    let twice = dir.path().join("b");
    for (path, jobs) in [(&once, "1"), (&twice, "3")] {
        let out = dmmo(
            &[
                "run",
                "--problem",
                "DMMF7",
                "--algorithm",
                "CAE-AN",
                "--runs",
                "2",
                "--seed",
                "11",
                "--pop-size",
                "16",
                "--num-changes",
                "3",
                "--jobs",
                jobs,
                "--out",
                path.to_str().unwrap(),
            ],
            &[],
        );
        assert!(out.status.success());
    }
    let read = |p: &Path, f: &str| std::fs::read(p.join(f)).unwrap();
    assert_eq!(read(&once, "runs.csv"), read(&twice, "runs.csv"));
    assert_eq!(read(&once, "curves.csv"), read(&twice, "curves.csv"));
    assert_eq!(read(&once, "summary.json"), read(&twice, "summary.json"));
}
