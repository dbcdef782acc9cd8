use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn aspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aspec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let o = aspec(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("aspec-{}-{name}", std::process::id()))
}

#[test]
fn brackets_listing() {
    let o = aspec(&["brackets", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
    assert_eq!(stdout(&aspec(&["brackets", "2", "--format", "zag"])), "0 1\n");
    let depths = stdout(&aspec(&["brackets", "5", "--format", "depths"]));
    assert!(depths.lines().any(|l| l == "2 3 3 2 2"));
    let fmpf = stdout(&aspec(&["brackets", "2", "--format", "fmpf"]));
    assert_eq!(fmpf, "0 1\n");
    assert_eq!(aspec(&["brackets", "13"]).status.code(), Some(2));
}

#[test]
fn spectrum_reports() {
    let r = json(&["spectrum", "id:624", "-n", "7"]);
    assert_eq!(r["result"]["s"], serde_json::json!([1, 1, 2, 5, 10, 21, 42]));
    assert_eq!(r["result"]["catalan_prefix"], 4);
    assert_eq!(r["result"]["stabilized_at"], Value::Null);
    let r = json(&["spectrum", "sheffer", "-n", "6"]);
    assert_eq!(r["result"]["s"], serde_json::json!([1, 1, 2, 5, 14, 42]));
    let r = json(&["spectrum", "dihedral:3", "-n", "6"]);
    assert_eq!(r["result"]["s"], serde_json::json!([1, 1, 2, 4, 5, 6]));
    let r = json(&["spectrum", "bool:3", "-n", "5"]);
    assert_eq!(r["result"]["stabilized_at"], 3);
}

#[test]
fn spectrum_witnesses() {
    let r = json(&["spectrum", "siena:79", "-n", "5", "--witnesses"]);
    let w = r["result"]["witnesses"].as_array().unwrap();
    let sizes: Vec<usize> = w.iter().map(|l| l.as_array().unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 1, 2, 4, 7]);
}

#[test]
fn spectrum_from_json_file() {
    let path = temp_path("g.json");
    std::fs::write(&path, r#"{"size":2,"table":[[1,0],[0,0]]}"#).unwrap();
    let r = json(&["spectrum", path.to_str().unwrap(), "-n", "6"]);
    assert_eq!(r["result"]["s"], serde_json::json!([1, 1, 2, 5, 14, 42]));
    std::fs::write(&path, r#"{"size":2,"table":[[1,0],[0,2]]}"#).unwrap();
    assert_eq!(aspec(&["spectrum", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn payload_is_reproducible_across_job_counts() {
    let a = json(&["spectrum", "cross", "-n", "6", "--witnesses", "--jobs", "1"]);
    let b = json(&["spectrum", "cross", "-n", "6", "--witnesses"]);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
}

#[test]
fn scan3_writes_golden_csv() {
    let golden = include_str!("../../core/tests/golden/scan3.csv");
    let path = temp_path("scan.csv");
    let o = aspec(&["scan3", "--out", path.to_str().unwrap(), "--jobs", "1"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden);
    std::fs::remove_file(path).unwrap();
    let csv = stdout(&aspec(&["scan3", "-n", "5"]));
    assert!(csv.starts_with("s3,s4,s5,count\n"));
    assert!(csv.ends_with("associative,24\n"));
}

#[test]
fn verify_families() {
    let o = aspec(&["verify", "fibonacci"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("PASS\n"));
    let r = json(&["verify", "linear:2:right"]);
    assert_eq!(r["result"]["pass"], true);
    let rows = r["result"]["rows"].as_array().unwrap();
    for row in rows.iter().filter(|r| r["arity"].as_u64().unwrap() >= 2) {
        let n = row["arity"].as_u64().unwrap();
        assert_eq!(row["computed"].as_u64().unwrap(), 1 << (n - 2));
    }
    let r = json(&["verify", "op3233"]);
    assert_eq!(r["result"]["non_catalan_from"], 6);
    assert_eq!(r["result"]["rows"][5]["computed"], 41);
}

#[test]
fn classes_listing() {
    let r = json(&["classes", "3"]);
    assert_eq!(r["result"]["count"], 3330);
    assert_eq!(stdout(&aspec(&["classes", "2", "--anti"])).lines().count(), 7);
    assert_eq!(aspec(&["classes", "4"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(aspec(&[]).status.code(), Some(1));
    assert_eq!(aspec(&["--help"]).status.code(), Some(0));
    assert_eq!(aspec(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(aspec(&["verify", "nope"]).status.code(), Some(1));
    assert_eq!(aspec(&["spectrum", "id:999"]).status.code(), Some(2));
    assert_eq!(aspec(&["spectrum", "nonsense"]).status.code(), Some(2));
    assert_eq!(aspec(&["spectrum", "dihedral:16", "-n", "7"]).status.code(), Some(3));
    assert_eq!(aspec(&["spectrum", "id:624", "--max-memory", "1000"]).status.code(), Some(3));
    assert_eq!(aspec(&["scan3", "--max-memory", "100"]).status.code(), Some(3));
}
