use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskweyl"))
        .args(args)
        .env_remove("DISKWEYL_THREADS")
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_at_four() {
    let v = json_stdout(&run(&["count", "--mu", "4"]));
    assert_eq!(v["n_disk"], 3);
    assert_eq!(v["n_lattice"], 3);
    assert_eq!(v["weyl2"], 2.0);
    assert_eq!(v["remainder"], 1.0);
    assert_eq!(v["diff"], 0);
}

#[test]
fn count_at_two() {
    let v = json_stdout(&run(&["count", "--mu", "2"]));
    assert_eq!(v["n_disk"], 0);
    assert_eq!(v["n_lattice"], 0);
    assert_eq!(v["remainder"], 0.0);
}

#[test]
fn fit_recovers_synthetic_power_law() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("synthetic.csv");
    let mut csv = String::from("mu,remainder\n");
    for i in 0..400 {
        let mu = 50.0 + 3.6 * f64::from(i);
        csv += &format!("{mu:.16e},{:.16e}\n", mu.powf(2.0 / 3.0));
    }
    fs::write(&input, csv).unwrap();
    let v = json_stdout(&run(&["fit", "--in", path_str(&input), "--block", "20"]));
    let e = v["exponent"].as_f64().unwrap();
    assert!((e - 2.0 / 3.0).abs() <= 0.01, "exponent {e}");
}

#[test]
fn scan_output_feeds_fit_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan.csv");
    let out = run(&[
        "scan",
        "--mu-min",
        "50",
        "--mu-max",
        "210",
        "--step",
        "1",
        "--out",
        path_str(&scan),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&scan).unwrap();
    assert!(text.starts_with("mu,n_disk,n_lattice,weyl2,remainder,diff\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 161);
    for column in ["remainder", "diff"] {
        let v = json_stdout(&run(&[
            "fit",
            "--in",
            path_str(&scan),
            "--block",
            "20",
            "--column",
            column,
        ]));
        assert!(v["exponent"].as_f64().unwrap().is_finite());
        assert_eq!(v["sample_count"], 160);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = ["a.csv", "b.csv"]
        .iter()
        .map(|f| dir.path().join(f))
        .collect();
    for (f, threads) in files.iter().zip(["1", "3"]) {
        let out = run(&[
            "--threads",
            threads,
            "scan",
            "--mu-min",
            "10",
            "--mu-max",
            "120",
            "--step",
            "0.7",
            "--out",
            path_str(f),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&files[0]).unwrap(), fs::read(&files[1]).unwrap());

    let z1 = run(&["zeros", "--mu", "40", "--n-max", "12"]);
    let z2 = run(&["zeros", "--mu", "40", "--n-max", "12"]);
    assert!(z1.status.success());
    assert_eq!(z1.stdout, z2.stdout);
}

#[test]
fn zeros_csv_is_lossless() {
    let out = run(&["zeros", "--mu", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k,x,residual"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[..2], ["0", "1"]);
    let x: f64 = first[2].parse().unwrap();
    assert!((x - 2.404_825_557_695_773).abs() < 1e-13);
    // j_{0,2}, j_{1,1}, j_{2,1} follow; j_{3,1} = 6.38 is past the cutoff
    assert_eq!(lines.count(), 3);
}

#[test]
fn argument_errors_exit_two_with_a_record() {
    let out = run(&["count", "--mu", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["exit_code"], 2);
    assert!(rec["error"].is_string());

    let out = run(&["scan", "--mu-min", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"], "usage");
}

#[test]
fn degenerate_fit_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zeros.csv");
    let mut csv = String::from("mu,remainder\n");
    for i in 0..200 {
        csv += &format!("{},0\n", 10 + i);
    }
    fs::write(&input, csv).unwrap();
    let out = run(&["fit", "--in", path_str(&input)]);
    assert_eq!(out.status.code(), Some(3));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"], "degenerate_fit");
}

#[test]
fn verify_and_mollify_report_success() {
    let v = json_stdout(&run(&[
        "verify",
        "--suite",
        "geometry",
        "--suite",
        "lattice",
        "--samples",
        "20",
    ]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 2);

    let s = json_stdout(&run(&["mollify", "--mu", "10"]));
    let (lo, mid, hi) = (
        s["n_minus"].as_f64().unwrap(),
        s["n_exact"].as_f64().unwrap(),
        s["n_plus"].as_f64().unwrap(),
    );
    assert!(lo <= mid && mid <= hi);
}
