use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bucket-hash"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn bucket-hash")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drops the ops_per_sec column, the only one allowed to vary between runs.
fn without_throughput(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut cols: Vec<&str> = l.split(',').collect();
            cols.remove(8);
            cols.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

const SMALL: &[&str] = &["--num-keys", "20000", "--trials", "2", "--seed", "7"];

#[test]
fn csv_header_matches_golden_file() {
    let golden = include_str!("golden/header.csv");
    let o = run(&[&["probes", "--table", "bcht"], SMALL].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().next().unwrap(), golden.trim_end());
}

#[test]
fn sequential_runs_are_identical_apart_from_throughput() {
    let args = [
        &["probes", "--table", "bcht", "--table", "iht", "--table", "bp2ht", "--load-factor", "0.7:0.9:0.1"][..],
        SMALL,
    ]
    .concat();
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a).lines().count(), 1 + 3 * 3 * 4);
    assert_eq!(without_throughput(&stdout(&a)), without_throughput(&stdout(&b)));
}

#[test]
fn unknown_table_is_a_usage_error() {
    let o = run(&["probes", "--table", "robinhood"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_values_are_usage_errors() {
    for args in [
        &["probes", "--bucket-size", "12", "--num-keys", "100"][..],
        &["probes", "--load-factor", "1.5", "--num-keys", "100"],
        &["probes", "--positive-ratio", "30"],
        &["probes", "--load-factor", "0.9:0.8:0.01"],
        &["probes", "--table", "1cht", "--bucket-size", "16", "--num-keys", "0"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn validate_reports_zero_violations() {
    let o = run(&[
        "validate",
        "--table",
        "iht",
        "--bucket-size",
        "32",
        "--threshold-pct",
        "80",
        "--load-factor",
        "0.9",
        "--num-keys",
        "50000",
        "--negatives",
        "50000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for counter in ["false_negatives", "wrong_values", "false_positives", "inadmissible"] {
        assert!(out.lines().any(|l| l == format!("{counter}=0")), "{counter}:\n{out}");
    }
}

#[test]
fn exhausted_budget_exits_one() {
    // BP2HT b=8 never reaches 0.99
    let o = run(&[
        "probes",
        "--table",
        "bp2ht",
        "--bucket-size",
        "8",
        "--load-factor",
        "0.99",
        "--num-keys",
        "5000",
        "--trials",
        "1",
        "--max-failures",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&[&["probes", "--table", "bcht", "--format", "json", "--out", path.to_str().unwrap()], SMALL].concat());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 4);
    assert_eq!(records[0]["kind"], "bcht");
}

#[test]
fn sectors_from_probe_count() {
    let o = run(&["sectors", "--table", "bcht", "--probes", "3", "--op", "find"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",12"), "{}", stdout(&o));
}

#[test]
fn success_rate_reports_a_peak() {
    let o = run(&[
        "success-rate",
        "--table",
        "bcht",
        "--load-factor",
        "0.8:0.9:0.05",
        "--num-keys",
        "5000",
        "--success-trials",
        "20",
    ]);
    assert!(o.status.success());
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(summary.contains("max load factor at 99% success = 0.9"), "{summary}");
}

#[test]
fn bench_reads_a_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"scenario":"load_factor_sweep","tables":[{"kind":"bp2ht","bucket_size":16}],
            "n_keys":[4000],"load_factors":[0.6],"trials":2}"#,
    )
    .unwrap();
    let o = run(&["bench", "--spec", spec.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.lines().skip(1).all(|l| l.starts_with("bp2ht,16,,4000,")), "{out}");
}
