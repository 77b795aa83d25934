use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::process::{Command, Output};

use jpa_core::record::{read_records, RecordStatus, ScanRecord};

fn jpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jpa"))
        .args(args)
        .output()
        .expect("run jpa")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn family_verify_prints_period_and_unit() {
    let o = jpa(&["family", "verify", "--n", "3", "--m", "4", "--t", "1", "--c", "1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("l1 = 4"), "{s}");
    assert!(s.contains("epsilon = w^2 + w + 1"), "{s}");
}

#[test]
fn family_verify_json_round_trips() {
    let o = jpa(&[
        "--json", "family", "verify", "--n", "4", "--m", "6", "--t", "2", "--c", "1,1,2,3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["l1"], 6);
    assert_eq!(v["passed"], true);
}

#[test]
fn analyze_quartic() {
    let o = jpa(&["analyze", "--poly", "-2,0,-2,-2,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("pisot: No"), "{s}");
    assert!(s.contains("-1.134186"), "{s}");
}

#[test]
fn unit_command() {
    let o = jpa(&["unit", "--n", "3", "--m", "5", "--t", "2", "--c", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("predicted unit equals the period product"));
    let o = jpa(&["--json", "unit", "--n", "3", "--m", "4", "--t", "1", "--c", "2,0,2"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["l1"], 12);
    assert_eq!(v["predicted_unit"], serde_json::Value::Null);
}

#[test]
fn expand_record_goes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.jsonl");
    let o = jpa(&[
        "expand",
        "--poly",
        "-2,-2,1",
        "--alpha",
        "0,1",
        "--budget",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (recs, corrupt) = read_records(&out).unwrap();
    assert!(corrupt.is_empty());
    assert_eq!(recs[0].l1, Some(2));
    assert_eq!(recs[0].unit_norm.as_deref(), Some("1"));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(
        jpa(&["family", "verify", "--n", "3", "--m", "2", "--t", "1", "--c", "1,0,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        jpa(&["family", "verify", "--n", "3", "--m", "4", "--t", "1", "--c", "1,2,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(jpa(&["analyze", "--poly", "3,2"]).status.code(), Some(2));
    assert_eq!(
        jpa(&["expand", "--poly", "-2,-2,1", "--alpha", "0,x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        jpa(&["scan", "nthroot", "--n", "3", "--from", "9", "--to", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(jpa(&["bogus"]).status.code(), Some(2));
}

#[test]
fn resource_limit_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_jpa"))
        .args([
            "scan", "nthroot", "--n", "3", "--from", "4", "--to", "4", "--budget", "2000",
        ])
        .env("JPA_BIT_LIMIT", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let r: ScanRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r.status, RecordStatus::ResourceLimit);
}

#[test]
fn grid_exit_code_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.jsonl");
    let o = jpa(&[
        "family",
        "grid",
        "--n-max",
        "3",
        "--m-span",
        "2",
        "--t",
        "1,3",
        "--c-max",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (recs, _) = read_records(&out).unwrap();
    assert!(stdout(&o).contains(&format!("{} cases, {} passed, 0 failed", recs.len(), recs.len())));
    assert!(recs.iter().all(|r| r.passed == Some(true)));
}

fn scan_to(path: &std::path::Path, from: &str, to: &str, resume: bool, threads: &str) -> Output {
    let mut args = vec![
        "--threads",
        threads,
        "scan",
        "nthroot",
        "--n",
        "3",
        "--from",
        from,
        "--to",
        to,
    ];
    args.extend(["--budget", "300", "--out", path.to_str().unwrap()]);
    if resume {
        args.push("--resume");
    }
    jpa(&args)
}

#[test]
fn resume_after_partial_write_has_no_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    assert_eq!(scan_to(&out, "2", "12", false, "2").status.code(), Some(0));
    let full = fs::read_to_string(&out).unwrap();
    // simulate a crash: keep four records and half of the fifth
    let lines: Vec<&str> = full.lines().collect();
    let mut cut = lines[..4].join("\n");
    cut.push('\n');
    cut.push_str(&lines[4][..lines[4].len() / 2]);
    fs::write(&out, &cut).unwrap();

    let o = scan_to(&out, "2", "20", true, "2");
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("partial final line"));
    let (recs, corrupt) = read_records(&out).unwrap();
    assert!(corrupt.is_empty());
    let params: HashSet<_> = recs.iter().map(|r| r.params.clone()).collect();
    assert_eq!(params.len(), recs.len());
    // 2..=20 without the cubes 8 and 27
    assert_eq!(recs.len(), 18);

    // nothing left to do
    let o = scan_to(&out, "2", "20", true, "2");
    assert!(stdout(&o).contains("nothing to do"));
    assert_eq!(read_records(&out).unwrap().0.len(), 18);
}

#[test]
fn corrupt_lines_are_skipped_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    scan_to(&out, "2", "4", false, "1");
    let mut f = fs::OpenOptions::new().append(true).open(&out).unwrap();
    writeln!(f, "{{not json").unwrap();
    drop(f);
    let o = scan_to(&out, "2", "6", true, "1");
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped corrupt line 4"));
    let (recs, corrupt) = read_records(&out).unwrap();
    assert_eq!(corrupt, vec![4]);
    assert_eq!(recs.len(), 5);
}

#[test]
fn single_thread_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    scan_to(&a, "2", "15", false, "1");
    scan_to(&b, "2", "15", false, "1");
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(x, y);
    // ordering does not depend on the thread count
    let c = dir.path().join("c.jsonl");
    scan_to(&c, "2", "15", false, "4");
    assert_eq!(fs::read(&c).unwrap(), x);
}

#[test]
fn timing_adds_wall_ms() {
    let o = jpa(&[
        "--timing",
        "scan",
        "conjecture",
        "--x-from",
        "2",
        "--x-to",
        "2",
        "--budget",
        "50",
    ]);
    let r: ScanRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(r.wall_ms.is_some());
    assert_eq!(r.status, RecordStatus::BudgetExhausted);
    let o = jpa(&["scan", "conjecture", "--x-from", "2", "--x-to", "2", "--budget", "50"]);
    let r: ScanRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(r.wall_ms.is_none());
}
