use std::io::Cursor;
use std::process::Command;

use congruence_lab::sweep::{run_sweep, CaseClass, SweepPlan};
use congruence_lab_cli::report::{read_csv, read_jsonl, write_csv, write_jsonl, RecordRow, Report, CSV_COLUMNS};
use congruence_lab_cli::{run, Io};
use congruence_lab::{Status, VerificationRecord};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_congruence-lab"));
    c.env_remove("CONGRUENCE_LAB_JOBS");
    c
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn sample_report() -> Report {
    let plan = SweepPlan {
        class: CaseClass::All,
        prime_max: 60,
        exponents: vec![1, 2],
        pp_cap: 3000,
        ..SweepPlan::default()
    };
    let res = run_sweep(&plan).unwrap();
    Report::new(&plan, &res.records, &res.summary)
}

#[test]
fn verify_single_case_exits_zero() {
    let (code, out, _) = exec(&["verify", "--ids", "T1.5-F", "--prime-max", "100"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() > 2);
}

#[test]
fn unknown_id_is_a_usage_error() {
    let (code, _, err) = exec(&["verify", "--ids", "bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("bogus"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(exec(&["verify", "--prime-min", "2"]).0, 2);
    assert_eq!(exec(&["verify", "--exp", "4"]).0, 2);
    assert_eq!(exec(&["verify", "--format", "xml"]).0, 2);
    assert_eq!(exec(&["eval", "--id", "RV1", "--p", "9"]).0, 2);
    assert_eq!(exec(&["repr", "--p", "7", "--form", "x2+5y2"]).0, 2);
    assert_eq!(exec(&["nonsense"]).0, 2);
}

#[test]
fn csv_has_header_and_one_row_per_record() {
    let (code, out, _) = exec(&["verify", "--ids", "all", "--prime-max", "13", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let rows = read_csv(out.as_bytes()).unwrap();
    assert_eq!(rows.len(), lines.count());
    assert!(!rows.is_empty() && rows.iter().all(|r| r.status == Status::Pass && r.p <= 13));
}

#[test]
fn eval_examples() {
    let (code, out, _) = exec(&["eval", "--id", "RV2", "--p", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("lhs: 19 (= -6)") && out.contains("rhs: 19 (= -6)"), "{out}");
    let (code, out, _) = exec(&["eval", "--id", "T1.4", "--p", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("status: inapplicable"));
    let (code, out, _) = exec(&["eval", "--id", "C1.8-F4", "--p", "7", "--format", "jsonl"]);
    assert_eq!(code, 0);
    let row: RecordRow = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((row.lhs, row.rhs, row.status), (Some(1), Some(1), Status::Pass));
}

#[test]
fn repr_examples() {
    assert_eq!(exec(&["repr", "--p", "43", "--form", "x2+3y2"]).1.trim(), "(4,3)");
    assert_eq!(exec(&["repr", "--p", "5", "--form", "x2+3y2"]).1.trim(), "none");
    assert_eq!(exec(&["repr", "--p", "11", "--form", "x2+2y2"]).1.trim(), "(3,1)");
    assert_eq!(exec(&["repr", "--p", "43", "--form", "x2+3y2", "--norm", "y1mod4"]).1.trim(), "(4,-3)");
}

#[test]
fn conjecture_report_always_exits_zero() {
    let (code, out, err) = exec(&["conjectures", "--prime-max", "200", "--format", "table"]);
    assert_eq!(code, 0);
    let row = out.lines().find(|l| l.starts_with("Conj5.1-a ") && l.split_whitespace().nth(1) == Some("7")).unwrap();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&cells[3..7], &["49", "31", "31", "PASS"]);
    assert!(row.contains("x=2 y=1"));
    // the one known counterexample family is reported prominently
    assert!(err.contains("FINDING: Conj5.2i-ksum"), "{err}");
}

#[test]
fn mutation_mode_catches_every_case() {
    let (code, _, err) = exec(&["conjectures", "--prime-max", "100", "--mutate"]);
    assert_eq!(code, 0, "{err}");
    // too few primes to catch everything
    let (code, _, err) = exec(&["conjectures", "--prime-max", "5", "--mutate"]);
    assert_eq!(code, 1);
    assert!(err.contains("undetected"));
}

#[test]
fn verify_exit_codes_follow_failures() {
    assert_eq!(exec(&["verify", "--prime-max", "50", "--exp", "1,2", "--pp-cap", "2500"]).0, 0);
    // an explicitly requested case with a known counterexample makes verify fail
    let (code, _, err) = exec(&["verify", "--ids", "Conj5.2i-ksum", "--prime-max", "20"]);
    assert_eq!(code, 1);
    assert!(err.contains("fail"));
}

#[test]
fn jobs_env_var_is_the_default() {
    let out = bin()
        .env("CONGRUENCE_LAB_JOBS", "3")
        .args(["verify", "--ids", "C1.7", "--prime-max", "20"])
        .output()
        .unwrap();
    let report = read_jsonl(Cursor::new(out.stdout)).unwrap();
    assert_eq!(report.plan.jobs, 3);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let (code, out, _) = exec(&["verify", "--ids", "C1.7", "--prime-max", "30", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let report = read_jsonl(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(report.records.len(), report.summary.total);
}

#[test]
fn properties_are_seeded() {
    let a = exec(&["properties", "--seed", "11", "--count", "3", "--prime-max", "100"]);
    let b = exec(&["properties", "--seed", "11", "--count", "3", "--prime-max", "100"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn jsonl_round_trip() {
    let report = sample_report();
    assert!(!report.deviations.is_empty());
    let mut buf = Vec::new();
    write_jsonl(&report, &mut buf).unwrap();
    assert_eq!(String::from_utf8_lossy(&buf).lines().count(), report.records.len() + 2);
    assert_eq!(read_jsonl(Cursor::new(buf)).unwrap(), report);
}

#[test]
fn csv_round_trip() {
    let report = sample_report();
    let mut buf = Vec::new();
    write_csv(&report.records, &mut buf).unwrap();
    let back = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, report.records);
    let originals: Vec<VerificationRecord> = back.iter().map(VerificationRecord::from).collect();
    assert_eq!(originals.iter().map(RecordRow::from).collect::<Vec<_>>(), report.records);
}

#[test]
fn large_numbers_are_strings() {
    let mut report = sample_report();
    report.records.truncate(1);
    report.records[0].modulus = (1 << 53) + 1;
    report.records[0].rhs_alt = Some(u64::MAX);
    report.records[0].x = Some(-(1 << 60));
    report.records[0].p = (1 << 53) - 1;
    let mut buf = Vec::new();
    write_jsonl(&report, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.contains("\"modulus\":\"9007199254740993\""));
    assert!(text.contains(&format!("\"rhs_alt\":\"{}\"", u64::MAX)));
    assert!(text.contains("\"x\":\"-1152921504606846976\""));
    assert!(text.contains("\"p\":9007199254740991"));
    assert_eq!(read_jsonl(Cursor::new(buf)).unwrap(), report);
}

#[test]
fn library_entry_point_reports_usage_errors() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(["congruence-lab", "verify", "--ids", "nope"], &mut Io { out: &mut out, err: &mut err });
    assert_eq!(code, 2);
    let code = run(["congruence-lab", "--help"], &mut Io { out: &mut out, err: &mut err });
    assert_eq!(code, 0);
    assert!(String::from_utf8_lossy(&out).contains("conjectures"));
}
