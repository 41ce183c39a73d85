//! Black-box tests of the `premia` binary: output schemas, exit codes,
//! and byte-for-byte determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn premia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_premia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write(dir: &TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

const AVAR_HALF: &str = r#"{"kind":"avar","alpha":0.5}"#;

#[test]
fn prices_a_single_contract() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "1\n2\n3\n4\n");
    let out = premia(&["price", "--input", &input, "--distortion", AVAR_HALF]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "{\"premium\":3.5}\n");
    assert!(out.status.success());
}

#[test]
fn prices_a_book_in_contract_order() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "book.csv",
        "contract_id,loss\nb,5\na,1\nb,7\na,3\nc,2\nc,2\n",
    );
    let out = premia(&["price", "--input", &input, "--distortion", AVAR_HALF]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let ids: Vec<String> = text
        .lines()
        .map(|line| {
            let v: Value = serde_json::from_str(line).unwrap();
            v["contract_id"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(ids, ["a", "b", "c"], "contracts must be emitted in id order");
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["premium"].as_f64().unwrap(), 3.0);
}

#[test]
fn inline_json_and_distortion_files_agree() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "1\n2\n3\n4\n");
    let hfile = write(&dir, "h.json", AVAR_HALF);
    let inline = premia(&["price", "--input", &input, "--distortion", AVAR_HALF]);
    let from_file = premia(&["price", "--input", &input, "--distortion", &hfile]);
    assert_eq!(inline.stdout, from_file.stdout);
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "1\n2\n3\n4\n");
    let report = dir.path().join("quote.json");
    let to_stdout = premia(&["price", "--input", &input, "--distortion", AVAR_HALF]);
    let to_file = premia(&[
        "price",
        "--input",
        &input,
        "--distortion",
        AVAR_HALF,
        "--output",
        report.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert_eq!(fs::read(&report).unwrap(), to_stdout.stdout);
}

#[test]
fn empty_input_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "empty.txt", "");
    let out = premia(&["price", "--input", &input, "--distortion", AVAR_HALF]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_distortion_kind_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "1\n2\n");
    let out = premia(&[
        "price",
        "--input",
        &input,
        "--distortion",
        r#"{"kind":"frobnicate"}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_numeric_rows_are_an_input_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "1\ntwo\n3\n");
    let out = premia(&["price", "--input", &input, "--distortion", AVAR_HALF]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn robust_with_unbounded_density_reports_and_succeeds() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "1\n2\n3\n4\n");
    let out = premia(&[
        "robust",
        "--input",
        &input,
        "--distortion",
        r#"{"kind":"power","s":0.8}"#,
        "--epsilon",
        "0.1",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["status"], "unbounded");
    assert!(report.get("value").is_none(), "no finite value to report");
}

#[test]
fn robust_at_zero_radius_reprices_the_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "0.5\n1.5\n2\n4\n4.5\n6\n");
    let tail = r#"{"kind":"avar","alpha":0.9}"#;
    let quote = stdout_json(&premia(&["price", "--input", &input, "--distortion", tail]));
    let robust = stdout_json(&premia(&[
        "robust", "--input", &input, "--distortion", tail, "--epsilon", "0",
    ]));
    assert_eq!(robust["status"], "attained");
    assert_eq!(robust["value"], quote["premium"]);
    assert_eq!(robust["ambiguity_premium"].as_f64().unwrap(), 0.0);
}

#[test]
fn robust_order_two_reports_loading_and_companion_figure() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "0.5\n1.5\n2\n4\n4.5\n6\n");
    let square = r#"{"kind":"power","s":2.0}"#;
    let quote = stdout_json(&premia(&["price", "--input", &input, "--distortion", square]));
    let pi = quote["premium"].as_f64().unwrap();
    let out = premia(&[
        "robust", "--input", &input, "--distortion", square, "--epsilon", "0.1", "--order", "2",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["status"], "attained");
    let norm = 2.0 / 3.0f64.sqrt();
    let value = report["value"].as_f64().unwrap();
    assert!((value - (pi + 0.1 * norm)).abs() < 1e-9, "value {value}");
    let variant = report["value_statement_variant"].as_f64().unwrap();
    assert!(
        (variant - (pi + 0.1 * norm * norm)).abs() < 1e-9,
        "companion figure {variant}"
    );
    let shift = report["worst_case_shift"].as_array().unwrap();
    assert_eq!(shift.len(), 101);
}

#[test]
fn distance_from_a_file_to_itself_is_zero() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "losses.txt", "0.3\n1.9\n2.2\n5\n");
    let out = premia(&["distance", "--input", &input, "--against", &input]);
    let report = stdout_json(&out);
    assert_eq!(report["distance"].as_f64().unwrap(), 0.0);
    assert_eq!(report["metric"], "d1");
}

#[test]
fn distance_matches_a_hand_checked_value() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "0\n1\n");
    let b = write(&dir, "b.txt", "1\n2\n");
    let report = stdout_json(&premia(&["distance", "--input", &a, "--against", &b]));
    assert!((report["distance"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let powered = stdout_json(&premia(&[
        "distance", "--input", &a, "--against", &b, "--metric", "dp", "--power", "2",
    ]));
    // powered ground metric: mean of |x^2 - y^2| over matched quantiles
    assert!((powered["distance"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn simulate_is_byte_deterministic_and_writes_grids() {
    let run = |dir: &TempDir| -> (Vec<u8>, Vec<u8>) {
        let report = dir.path().join("study.json");
        let out = premia(&[
            "simulate",
            "--distortion",
            r#"{"kind":"avar","alpha":0.9}"#,
            "--contracts",
            "6",
            "--sample-size",
            "200",
            "--seed",
            "7",
            "--basis",
            "step",
            "--size",
            "5",
            "--output",
            report.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        let grid = dir.path().join("study_step_5.csv");
        assert!(grid.exists(), "density grid missing");
        (fs::read(&report).unwrap(), fs::read(&grid).unwrap())
    };
    let first_dir = TempDir::new().unwrap();
    let second_dir = TempDir::new().unwrap();
    let (report_a, grid_a) = run(&first_dir);
    let (report_b, grid_b) = run(&second_dir);
    assert_eq!(report_a, report_b, "simulation reports differ between runs");
    assert_eq!(grid_a, grid_b, "density grids differ between runs");

    let report: Value = serde_json::from_slice(&report_a).unwrap();
    assert_eq!(report["fits"][0]["basis"], "step");
    assert_eq!(report["observed_prices"].as_array().unwrap().len(), 6);
}

#[test]
fn simulate_with_no_contracts_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("study.json");
    let out = premia(&[
        "simulate",
        "--distortion",
        r#"{"kind":"avar","alpha":0.9}"#,
        "--contracts",
        "0",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identify_recovers_a_planted_density_from_files() {
    let dir = TempDir::new().unwrap();
    // three contracts priced under the step density (0.5, 1.5)
    let mut book = String::from("contract_id,loss\n");
    let mut prices = String::from("contract_id,price\n");
    let mut state = 11u64;
    let mut next = || {
        // splitmix64 step, inlined to keep the fixture self-contained
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        (z ^ (z >> 31)) as f64 / u64::MAX as f64
    };
    for id in ["x", "y", "z"] {
        let mut losses: Vec<f64> = (0..40).map(|_| 5.0 * next()).collect();
        losses.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = losses.len() as f64;
        let price: f64 = losses
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let cdf = |u: f64| if u <= 0.5 { 0.5 * u } else { 0.25 + 1.5 * (u - 0.5) };
                x * (cdf((i as f64 + 1.0) / n) - cdf(i as f64 / n))
            })
            .sum();
        for x in &losses {
            book.push_str(&format!("{id},{x}\n"));
        }
        prices.push_str(&format!("{id},{price}\n"));
    }
    let book = write(&dir, "book.csv", &book);
    let prices = write(&dir, "prices.csv", &prices);
    let report_path = dir.path().join("fit.json");
    let out = premia(&[
        "identify",
        "--input",
        &book,
        "--prices",
        &prices,
        "--basis",
        "step",
        "--size",
        "2",
        "--output",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["basis"], "step");
    let lambda = report["lambda"].as_array().unwrap();
    assert!((lambda[0].as_f64().unwrap() - 0.5).abs() < 1e-6, "lambda {lambda:?}");
    assert!((lambda[1].as_f64().unwrap() - 1.5).abs() < 1e-6, "lambda {lambda:?}");
    assert!(report["objective"].as_f64().unwrap() < 1e-12);

    let grid = Path::new(&report_path).with_extension("grid.csv");
    let grid = fs::read_to_string(grid).unwrap();
    assert_eq!(grid.lines().count(), 1002, "header plus 1001 grid rows");
    assert_eq!(grid.lines().next().unwrap(), "v,h");
}

#[test]
fn identify_with_mismatched_ids_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let book = write(&dir, "book.csv", "a,1\na,2\nb,1\nb,3\n");
    let prices = write(&dir, "prices.csv", "a,1.5\nc,2.0\n");
    let report = dir.path().join("fit.json");
    let out = premia(&[
        "identify",
        "--input",
        &book,
        "--prices",
        &prices,
        "--basis",
        "step",
        "--size",
        "2",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
