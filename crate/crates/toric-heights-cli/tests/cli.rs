use std::process::Command;

use toric_heights_cli::run::{DegreeReport, PredictReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-heights"))
}

const SKEW: &str = r#"{
  "f": {"terms": [[[0, 0], "1"], [[1, 0], "1"], [[0, 1], "1"]]},
  "g": {"terms": [[[0, 0], "2"], [[1, 0], "-1"], [[1, 1], "1/3"]]}
}"#;

#[test]
fn degree_from_a_problem_file() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("skew.json");
    std::fs::write(&problem, SKEW).unwrap();
    let out = bin().args(["degree", "--primes", "11..13", "--problem"]).arg(&problem).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: DegreeReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.mixed_volume, "2");
    assert_eq!(r.twisted_torus_solutions, Some(2));
}

#[test]
fn verify_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let status = bin()
        .args(["verify", "--primes", "11..23", "--budget", "2000", "--resolution", "16", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let mut reader = csv::Reader::from_path(&out).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), ["N", "s", "lhs", "rhs", "abs_dev", "degree", "status", "wall_ms"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| &r[6] == "ok"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["degrees_match"], true);
}

#[test]
fn predict_on_stdout() {
    let out = bin().args(["predict", "--budget", "2000", "--resolution", "16"]).output().unwrap();
    assert!(out.status.success());
    let r: PredictReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.degree, "1");
    assert!(r.error < 0.1);
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(!bin().args(["verify", "--primes", "2..9"]).output().unwrap().status.success());
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("bad.json");
    std::fs::write(&problem, r#"{"f": {"terms": [[[0, 0], "x"]]}}"#).unwrap();
    let out = bin().arg("tail").arg("--problem").arg(&problem).output().unwrap();
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}
