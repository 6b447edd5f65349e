//! End-to-end tests of the `toruslab` binary: exit codes, JSON/CSV output,
//! determinism, and the sample-CSV input path.

use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toruslab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn write_spec(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn analyze_z2_reports_growth_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "z2.json", r#"{"polynomials": [[[0,0],[0,0],[1,0]]]}"#);
    let out = run(&["analyze", "--spec", &spec, "--rmax", "1e4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["command"], "analyze");
    assert_eq!(report["results"]["m"], 1);
    let slope = report["results"]["growth"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() <= 0.05, "slope {slope}");
    let order = report["results"]["order"]["slope"].as_f64().unwrap();
    assert!((order - 2.0).abs() <= 0.05, "order {order}");
    assert_eq!(report["results"]["verdict"], "pass");
}

#[test]
fn analyze_constant_curve_reports_constant_map() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "const.json", r#"{"polynomials": [[[5,0]]]}"#);
    let out = run(&["analyze", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["results"]["m"], -1);
    assert_eq!(report["results"]["verdict"], "constant map");
}

#[test]
fn malformed_inputs_exit_2_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();

    // syntactically broken JSON: diagnostic carries line/column
    let bad = write_spec(dir.path(), "bad.json", "{\n  \"polynomials\": [[[0,0],]]}");
    let out = run(&["analyze", "--spec", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    // structurally empty spec
    let empty = write_spec(dir.path(), "empty.json", r#"{"polynomials": []}"#);
    let out = run(&["analyze", "--spec", &empty]);
    assert_eq!(out.status.code(), Some(2));

    // missing file
    let out = run(&["analyze", "--spec", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // level sets require deg >= 2
    let out = run(&["levelset", "--poly", "0,1"]);
    assert_eq!(out.status.code(), Some(2));

    // recover with one samples file is rejected by flag validation
    let out = run(&["recover", "--samples", "only-one.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn levelset_csv_reports_the_asymptotic_ratio() {
    let out = run(&["levelset", "--poly", "0,0,1", "--format", "csv", "--rmax", "1e4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,measure,bound,ratio,r0_empirical"));
    let last = text.lines().last().unwrap();
    let cells: Vec<&str> = last.split(',').collect();
    assert_eq!(cells.len(), 5);
    let r: f64 = cells[0].parse().unwrap();
    let ratio: f64 = cells[3].parse().unwrap();
    assert_eq!(r, 1e4);
    assert!((3.8..=4.2).contains(&ratio), "ratio {ratio}");

    // lossless round trip: every numeric cell reparses to a float that
    // formats back to the identical string
    for line in text.lines().skip(1) {
        for cell in line.split(',').filter(|c| !c.is_empty()) {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(format!("{v}"), cell);
        }
    }
}

#[test]
fn recover_reads_sample_csv_files() {
    // samples of Re g for g(z) = z^3 + 2 on two circles
    let dir = tempfile::tempdir().unwrap();
    let n = 4096;
    for (name, r) in [("r2.csv", 2.0f64), ("r5.csv", 5.0f64)] {
        let mut csv = String::from("theta_index,value\n");
        for j in 0..n {
            let theta = j as f64 * TAU / n as f64;
            let v = r.powi(3) * (3.0 * theta).cos() + 2.0;
            csv.push_str(&format!("{j},{v}\n"));
        }
        std::fs::write(dir.path().join(name), csv).unwrap();
    }
    let out = run(&[
        "recover",
        "--samples",
        dir.path().join("r2.csv").to_str().unwrap(),
        "--samples2",
        dir.path().join("r5.csv").to_str().unwrap(),
        "--r1",
        "2",
        "--r2",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["results"]["detected_degrees"][0], 3);
    let coeffs = report["results"]["components"][0]["coefficients"]
        .as_array()
        .unwrap();
    let expect = [(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)];
    for (k, &(re, im)) in expect.iter().enumerate() {
        let got_re = coeffs[k][0].as_f64().unwrap();
        let got_im = coeffs[k][1].as_f64().unwrap();
        assert!(
            (got_re - re).abs() <= 1e-9 && (got_im - im).abs() <= 1e-9,
            "a_{k} = ({got_re}, {got_im})"
        );
    }
}

#[test]
fn identical_invocations_produce_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "curve.json",
        r#"{"label": "demo", "polynomials": [[[0,0],[0,0],[0,0],[1,0]], [[0,0],[1,0]]]}"#,
    );
    let out1 = dir.path().join("a.json");
    let out2 = dir.path().join("b.json");
    for out in [&out1, &out2] {
        let status = bin()
            .args(["analyze", "--spec", &spec, "--rmax", "1e3"])
            .args(["--out", out.to_str().unwrap()])
            .env("TORUSLAB_THREADS", "2")
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "reports differ between identical runs");
}

#[test]
fn verify_exit_codes_distinguish_failure() {
    // negative-control checks pass quickly
    let out = run(&["verify", "--quick", "--only", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("[pass]"));

    // the corrupted bound constant must be caught and exit 1
    let out = run(&["verify", "--quick", "--only", "4", "--corrupt-bound"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("failing checks: 4"));

    // bad check id is an input error
    let out = run(&["verify", "--only", "11"]);
    assert_eq!(out.status.code(), Some(2));
}
