use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use skewchain::example::{example_channels, rho_theta, CSV_HEADER};
use skewchain::io::{channel_to_json, state_to_json};

fn skewchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewchain")).args(args).output().expect("binary runs")
}

fn report_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("missing key {key}"))
        .to_owned()
}

fn write_example_inputs(dir: &Path, theta: f64, p: f64, q: f64) -> [String; 3] {
    let (n1, n2) = example_channels(p, q).unwrap();
    let paths = [dir.join("state.json"), dir.join("n1.json"), dir.join("n2.json")];
    fs::write(&paths[0], state_to_json(&rho_theta(theta).unwrap())).unwrap();
    fs::write(&paths[1], channel_to_json(&n1)).unwrap();
    fs::write(&paths[2], channel_to_json(&n2)).unwrap();
    paths.map(|p| p.to_str().unwrap().to_owned())
}

#[test]
fn bounds_on_worked_example() {
    let out = skewchain(&["bounds"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let product: f64 = report_value(&text, "product").parse().unwrap();
    let lemma1: f64 = report_value(&text, "lemma1").parse().unwrap();
    assert!((product - 0.021_446_61).abs() < 1e-8);
    assert!((lemma1 - 0.003_140_78).abs() < 1e-8);
    assert_eq!(report_value(&text, "verdict_passed"), "true");
}

#[test]
fn bounds_from_files_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let [s, c1, c2] = write_example_inputs(dir.path(), 0.5, 0.3, 0.7);
    let report = dir.path().join("report.txt");
    let out =
        skewchain(&["bounds", "--state", &s, "--channel1", &c1, "--channel2", &c2, "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&report).unwrap();
    for key in ["product", "sum", "lemma1", "I1", "I4", "S_2_1", "perm_opt"] {
        assert_eq!(report_value(&text, key), "0", "{key}");
    }
    let csv = fs::read_to_string(dir.path().join("report.txt.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
}

#[test]
fn bounds_rejects_incomplete_channel() {
    let dir = tempfile::tempdir().unwrap();
    let [s, c1, _] = write_example_inputs(dir.path(), 1.0, 0.5, 0.5);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"dim": 4, "kraus": [[[[0.9,0],[0,0],[0,0],[0,0]],[[0,0],[0.9,0],[0,0],[0,0]],[[0,0],[0,0],[0.9,0],[0,0]],[[0,0],[0,0],[0,0],[0.9,0]]]], "convention": "row_sum"}"#).unwrap();
    let out = skewchain(&["bounds", "--state", &s, "--channel1", &c1, "--channel2", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row_sum") && err.contains("residual"), "{err}");
}

#[test]
fn bounds_needs_all_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let [s, _, _] = write_example_inputs(dir.path(), 1.0, 0.5, 0.5);
    assert_eq!(skewchain(&["bounds", "--state", &s]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let out = skewchain(&[
            "verify",
            "--dims",
            "2,3",
            "--instances",
            "15",
            "--seed",
            "9",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(report_value(&text, "hard_failures"), "0");
    assert!(text.contains("anchor.as-printed.S21_I2.max_dev="));
    assert!(text.contains("anchor.product.Sdd1_lemma1.max_dev="));

    let tiny = skewchain(&["verify", "--dims", "3", "--instances", "10", "--tol", "1e-18"]);
    assert_eq!(tiny.status.code(), Some(1));
    assert_eq!(skewchain(&["verify", "--instances", "0"]).status.code(), Some(2));
}

#[test]
fn example_writes_tables_of_grid_size() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("ex");
    let out = skewchain(&[
        "example",
        "--out",
        out_dir.to_str().unwrap(),
        "--theta",
        "0:1:3",
        "--p",
        "0:1:4",
        "--q",
        "0.5",
        "--t",
        "0:1:2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for k in 1..=4 {
        let csv = fs::read_to_string(out_dir.join(format!("figure{k}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3 * 4 * 2);
        assert!(rows.iter().all(|r| r.split(',').count() == 23));
    }
    let report = fs::read_to_string(out_dir.join("discrepancy_report.csv")).unwrap();
    let header = report.lines().next().unwrap();
    for col in ["eq20_numeric", "eq21_ratio", "eq24_printed", "eq25_abs_dev"] {
        assert!(header.split(',').any(|c| c == col), "{col}");
    }
}

#[test]
fn example_single_point_and_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = skewchain(&[
        "example",
        "--out",
        dir.path().to_str().unwrap(),
        "--theta",
        "0.5",
        "--p",
        "0.5",
        "--q",
        "0.5",
        "--t",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    let values: Vec<&str> = row.split(',').skip(4).collect();
    assert!(values.iter().all(|v| *v == "0"), "{row}");

    let bad = skewchain(&["example", "--out", dir.path().to_str().unwrap(), "--theta", "0:1.5:3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn invariance_exit_codes() {
    assert_eq!(skewchain(&["invariance", "--trials", "20", "--tol", "1e-9"]).status.code(), Some(0));
    assert_eq!(skewchain(&["invariance", "--trials", "3", "--tol", "0"]).status.code(), Some(1));
    assert_eq!(skewchain(&["invariance", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn random_suite_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.csv");
    let out = skewchain(&["random-suite", "--dims", "2,4", "--instances", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 12);
    let width = lines[0].split(',').count();
    assert!(lines.iter().all(|l| l.split(',').count() == width));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(skewchain(&["bounds", "--s-reading", "sideways"]).status.code(), Some(2));
    assert_eq!(skewchain(&["nonsense"]).status.code(), Some(2));
}
