use std::path::PathBuf;
use std::process::{Command, Output};

use dhm::cli::{parse_scan_csv, OutputRecord, Payload, ScanRow};

fn dhm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhm"))
        .args(args)
        .output()
        .expect("spawn dhm")
}

fn json(out: &Output) -> OutputRecord {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dhm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn only(doc: OutputRecord) -> Payload {
    assert_eq!(doc.schema_version, "1");
    assert_eq!(doc.records.len(), 1);
    doc.records.into_iter().next().unwrap()
}

#[test]
fn gen_golden_sequences() {
    for (ijl, bits) in [("1,0,3", "1100001110"), ("1,2,3", "1000100111")] {
        let out = dhm(&["gen", "--q", "5", "--ijl", ijl, "--tilde", "--theta", "3"]);
        assert!(out.status.success());
        let Payload::Sequence(s) = only(json(&out)) else {
            panic!("expected sequence")
        };
        assert_eq!(s.bits, bits);
        assert_eq!(s.weight, 5);
        assert_eq!(s.condition, "tilde-s1");
    }
}

#[test]
fn gen_usage_errors() {
    assert_eq!(
        dhm(&["gen", "--q", "5", "--ijl", "0,0,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dhm(&["gen", "--q", "7", "--ijl", "0,1,2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dhm(&["gen", "--q", "13", "--ijl", "0,1,2", "--theta", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(dhm(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn autocorr_spectra() {
    let out = dhm(&["autocorr", "--q", "5", "--ijl", "1,0,3", "--tilde"]);
    let Payload::Spectrum(s) = only(json(&out)) else {
        panic!()
    };
    assert_eq!(s.max_offpeak, 2);
    assert_eq!(s.values[0], 10);

    let out = dhm(&["autocorr", "--q", "13", "--ijl", "0,1,3"]);
    let Payload::Spectrum(s) = only(json(&out)) else {
        panic!()
    };
    assert!(s.values[1..].iter().all(|&a| a == 2 || a == -2));
}

#[test]
fn c2_records() {
    let out = dhm(&["c2", "--q", "5", "--ijl", "1,0,3", "--tilde"]);
    let Payload::Complexity(c) = only(json(&out)) else {
        panic!()
    };
    assert_eq!(c.divisor, "11");
    assert_eq!(c.value, "log2(1023/11)");
    assert_eq!(c.s2, "451");

    let out = dhm(&["c2", "--q", "5", "--ijl", "0,1,2", "--tilde"]);
    let Payload::Complexity(c) = only(json(&out)) else {
        panic!()
    };
    assert_eq!(c.divisor, "1");

    let out = dhm(&["c2", "--q", "13", "--ijl", "0,1,3"]);
    let Payload::Complexity(c) = only(json(&out)) else {
        panic!()
    };
    assert_eq!(c.divisor, "3");
}

#[test]
fn verify_exit_codes() {
    let out = dhm(&["verify", "--qmax", "61"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("all identities hold"));

    let out = dhm(&["verify", "--qmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("0 checks"));

    let out = dhm(&["verify", "--qmax", "13", "--corrupt-table"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL q=13 cyclotomic-closed-form"));
    assert!(text.contains("period-product lambda="));
}

#[test]
fn scan_formats_match() {
    let csv_path = scratch("scan.csv");
    let json_path = scratch("scan.json");
    let a = dhm(&[
        "scan",
        "--qmax",
        "53",
        "--format",
        "csv",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    let b = dhm(&[
        "scan",
        "--qmax",
        "53",
        "--format",
        "json",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert!(a.status.success() && b.status.success());

    let csv_rows = parse_scan_csv(&std::fs::read(&csv_path).unwrap()).unwrap();
    let doc: OutputRecord = serde_json::from_slice(&std::fs::read(&json_path).unwrap()).unwrap();
    let json_rows: Vec<ScanRow> = doc
        .records
        .into_iter()
        .map(|p| match p {
            Payload::Verdict(r) => r,
            _ => panic!("unexpected payload"),
        })
        .collect();
    assert_eq!(csv_rows, json_rows);
    assert!(csv_rows.iter().all(|r| r.agree));
    assert_eq!(csv_rows.iter().filter(|r| r.d == "11").count(), 2);
}

#[test]
fn scan_q5_csv_has_the_nontrivial_divisor() {
    let out = dhm(&["scan", "--qmax", "5", "--format", "csv"]);
    let rows = parse_scan_csv(&out.stdout).unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows
        .iter()
        .any(|r| r.d == "11" && r.tilde && r.triple.to_string() == "1,0,3"));
}

#[test]
fn scan_respects_thread_cap() {
    let one = Command::new(env!("CARGO_BIN_EXE_dhm"))
        .args(["scan", "--qmax", "101"])
        .env("DHM_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_dhm"))
        .args(["scan", "--qmax", "101"])
        .env("DHM_THREADS", "8")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_dhm"))
        .args(["scan", "--qmax", "5"])
        .env("DHM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scan_unwritable_output() {
    let out = dhm(&["scan", "--qmax", "5", "--out", "/nonexistent-dir/scan.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_respects_thread_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_dhm"))
        .args(["verify", "--qmax", "37"])
        .env("DHM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_dhm"))
        .args(["verify", "--qmax", "37"])
        .env("DHM_THREADS", "-3")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
