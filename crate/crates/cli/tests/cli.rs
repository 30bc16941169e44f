use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fracseries"));
    c.env("FRACSERIES_THREADS", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn fracseries")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const HALF_PROBLEM: &str = r#"{"format": 1, "alpha": 0.5, "n": 1,
  "p": [{"coeffs": [1], "polynomial": true}], "b": [1], "N": 600}"#;

#[test]
fn ml_exponential() {
    let o = run(&["ml", "--alpha", "1", "--z", "1", "--tol", "1e-14"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - std::f64::consts::E).abs() <= 1e-14 * std::f64::consts::E);
}

#[test]
fn ml_negative_argument() {
    // E_{1/2}(-x) = exp(x²) erfc(x); at x = 3 this is 0.17900115...
    let o = run(&["ml", "--alpha", "0.5", "--z", "-3"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.179_001_151_160_946_7).abs() < 1e-13);
}

#[test]
fn bell_example() {
    let o = run(&["bell", "--n", "3", "--k", "2", "--", "1.0", "2.0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "6\n");
}

#[test]
fn order_prediction() {
    let o = run(&["order", "--alpha", "0.5", "--n", "1", "--degrees", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sigma_exact"], 2.0);

    let o = run(&["order", "--alpha", "1", "--n", "3", "--degrees", "3,none,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sigma_exact"], 2.0);
}

#[test]
fn solve_is_deterministic_and_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let prob = write(dir.path(), "p.json", HALF_PROBLEM);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = run(&["solve", "-i", &prob, "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());

    let sol = fracseries::io::parse_solution(&text).unwrap();
    assert_eq!(fracseries::io::solution_to_json(&sol), text);
    let (p, n) = fracseries::io::parse_problem(HALF_PROBLEM).unwrap();
    let direct = fracseries::solve_cauchy(&p, n).unwrap();
    for t in [0.5, 2.0, 7.0] {
        assert_eq!(sol.series.evaluate(t).unwrap(), direct.series.evaluate(t).unwrap());
    }
}

#[test]
fn deriv_of_series_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "u.json", r#"{"alpha": 0.5, "coeffs": [0.75, -1.25, 2.5]}"#);
    let o = run(&["deriv", "-i", &s, "--j", "2"]);
    assert!(o.status.success());
    let (d, _) = fracseries::io::parse_series(&stdout(&o)).unwrap();
    assert_eq!(d.order(), 0);
    assert!((d.coeff(0).to_f64() - 2.5).abs() < 1e-14);

    let o = run(&["deriv", "-i", &s, "--alpha", "0.25"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_pass_writes_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let prob = write(dir.path(), "p.json", HALF_PROBLEM);
    let rep = dir.path().join("rep.json");
    let csv = dir.path().join("wv.csv");
    let o = run(&[
        "verify", "-i", &prob, "-o", rep.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
        "--r-min", "1", "--r-max", "15", "--points", "30", "--min-decades", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("PASS"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    let csv = fs::read_to_string(&csv).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "r,nu,log_mu,log_M_lower,rel_err_j1,rel_err_j2");
    assert_eq!(csv.lines().count(), 31);
}

#[test]
fn verify_failure_exits_two() {
    // a fitted order near 2 against a 1% band around the prediction 2
    // fails on this short window
    let dir = tempfile::tempdir().unwrap();
    let prob = write(dir.path(), "p.json", HALF_PROBLEM);
    let o = run(&[
        "verify", "-i", &prob, "--r-min", "1", "--r-max", "15", "--points", "30", "--min-decades", "1",
        "--tolerance", "0.01",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn wv_closed_form_csv() {
    let o = run(&["wv", "--alpha", "0.5", "--r-min", "10", "--r-max", "1e6", "--points", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let err: f64 = last.split(',').nth(4).unwrap().parse().unwrap();
    assert!(err < 1e-9);
    assert_eq!(text, stdout(&run(&["wv", "--alpha", "0.5", "--r-min", "10", "--r-max", "1e6", "--points", "5"])));
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = write(dir.path(), "t.json", "{\"alpha\": 0.5,\n \"n\": 1,");
    let unknown = write(dir.path(), "u.json", r#"{"alpha": 0.5, "n": 1, "p": [[1]], "b": [1], "N": 5, "extra": 1}"#);
    let version = write(dir.path(), "v.json", r#"{"format": 9, "alpha": 0.5, "n": 1, "p": [{"coeffs": [1]}], "b": [1], "N": 5}"#);
    for path in [&truncated, &unknown, &version] {
        let o = run(&["solve", "-i", path]);
        assert_eq!(o.status.code(), Some(1), "{path}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    }
    let o = run(&["solve", "-i", &truncated]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(run(&["solve", "-i", "/nonexistent/p.json"]).status.code(), Some(1));
    assert_eq!(run(&["solve"]).status.code(), Some(1));
    assert_eq!(run(&["ml", "--alpha", "0", "--z", "1"]).status.code(), Some(1));
    assert_eq!(run(&["bell", "--n", "3", "--k", "2", "--", "1.0"]).status.code(), Some(1));
    assert_eq!(run(&["order", "--alpha", "1", "--n", "2", "--degrees", "x"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let o = bin().env("FRACSERIES_THREADS", "many").args(["bell", "--n", "1", "--k", "1", "--", "2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
