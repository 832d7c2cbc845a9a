use std::process::{Command, Output};

use serde_json::Value;

fn cdsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdsp"))
        .args(args)
        .env_remove("CDSP_TOL")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = cdsp(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)));
    (code(&o), v)
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn factorize_double_root() {
    let (c, v) = json(&["factorize", "--cos-theta", "0.6"]);
    assert_eq!(c, 0);
    let f = &v["factorization"];
    assert_eq!(f["case"], "Confluent");
    for a in f["alphas"].as_array().unwrap() {
        let (re, im) = pair(a);
        assert!((re - 2.0).abs() < 1e-9 && (im - 1.0).abs() < 1e-9);
    }
    assert!((f["b"].as_f64().unwrap() - 5.0).abs() < 1e-10);
}

#[test]
fn factorize_matches_golden_report() {
    let o = cdsp(&["factorize", "--cos-theta", "0.6", "--json"]);
    let golden = include_str!("golden/factorize_cos_0.6.json");
    assert_eq!(String::from_utf8(o.stdout).unwrap(), golden);
}

#[test]
fn factorize_antipodal_symmetry() {
    let (c, v) = json(&["factorize", "--theta", "3.14159265358979"]);
    assert_eq!(c, 0);
    let alphas = v["factorization"]["alphas"].as_array().unwrap();
    let (a1, a2) = (pair(&alphas[0]), pair(&alphas[1]));
    assert!((a2.0 + a1.0).abs() < 1e-9 && (a2.1 - a1.1).abs() < 1e-9, "{a1:?} {a2:?}");
}

#[test]
fn out_of_range_angle_is_usage_error() {
    assert_eq!(code(&cdsp(&["factorize", "--theta", "0"])), 1);
    assert_eq!(code(&cdsp(&["factorize", "--theta", "4"])), 1);
    assert_eq!(code(&cdsp(&["factorize", "--cos-theta", "1"])), 1);
    assert_eq!(code(&cdsp(&["certify", "--theta", "1", "--bogus"])), 1);
    assert_eq!(code(&cdsp(&["certify"])), 1);
}

#[test]
fn certify_confluent_is_not_subnormal() {
    let (c, v) = json(&["certify", "--cos-theta", "0.6"]);
    assert_eq!(c, 3);
    assert_eq!(v["verdict"]["subnormal"], false);
    assert_eq!(v["verdict"]["route"], "MinorConfluent");
    assert!(v["verdict"]["witness"][0].as_f64().unwrap() < 0.0);
}

#[test]
fn certify_literal_convention_reproduces_negative_determinant() {
    let (c, v) = json(&["certify", "--cos-theta", "0.6", "--convention", "literal"]);
    assert_eq!(c, 3);
    let det = v["verdict"]["first_minor_det"].as_f64().unwrap();
    let expected = -2000.0 / 9_765_625.0;
    assert!(((det - expected) / expected).abs() < 1e-9, "det {det}");
}

#[test]
fn certify_antipodal_is_subnormal() {
    let (c, v) = json(&["certify", "--theta", "pi"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"]["subnormal"], true);
    assert_eq!(v["verdict"]["route"], "Antipodal");
}

#[test]
fn certify_quarter_turn_has_all_blocks() {
    let (c, v) = json(&["certify", "--theta", "1.5707963", "--l-max", "3", "--size", "6"]);
    assert_eq!(c, 3);
    for block in ["input", "factorization", "gram", "debranges", "verdict", "timing"] {
        assert!(!v[block].is_null(), "missing {block}");
    }
    assert!(v["error"].is_null());
    assert!(v["timing"]["elapsed_ms"].is_null());
    assert_eq!(v["verdict"]["subnormal"], false);
}

#[test]
fn certify_uncertified_cases_exit_four() {
    assert_eq!(code(&cdsp(&["certify", "--theta", "2", "--c1", "2"])), 4);
    let (c, v) = json(&["certify", "--theta", "0.3", "--l-max", "1", "--size", "2"]);
    assert_eq!(c, 4);
    assert_eq!(v["error"]["kind"], "Inconclusive");
}

#[test]
fn certify_wrong_case_override_is_pipeline_error() {
    let (c, v) = json(&["certify", "--theta", "2", "--case", "confluent"]);
    assert_eq!(c, 2);
    assert_eq!(v["error"]["kind"], "WrongCase");
}

#[test]
fn reports_are_byte_identical() {
    let a = cdsp(&["certify", "--theta", "2*pi/3", "--json"]);
    let b = cdsp(&["certify", "--theta", "2*pi/3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_flag_fills_elapsed() {
    let (_, v) = json(&["factorize", "--theta", "pi/2", "--timing"]);
    assert!(v["timing"]["elapsed_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn tolerance_environment_variable() {
    let o = Command::new(env!("CARGO_BIN_EXE_cdsp"))
        .args(["factorize", "--theta", "1", "--json"])
        .env("CDSP_TOL", "1e-7")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["input"]["tolerances"]["decision"].as_f64(), Some(1e-7));
}

#[test]
fn sweep_to_pi_has_one_subnormal_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = cdsp(&["sweep", "--theta-min", "0.1", "--theta-max", "pi", "--steps", "64", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut r = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["theta", "cos_theta", "case", "a", "b", "witness_re", "witness_im", "verdict"]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 64);
    let thetas: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(thetas.windows(2).all(|w| w[0] < w[1]));
    let subnormal: Vec<usize> = (0..64).filter(|&i| &rows[i][7] == "true").collect();
    assert_eq!(subnormal, vec![63]);
    assert!(rows.iter().all(|r| &r[7] != "error" && &r[7] != "inconclusive"));
}

#[test]
fn sweep_two_steps_to_stdout() {
    let o = cdsp(&["sweep", "--theta-min", "0.5", "--theta-max", "1.5", "--steps", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "theta,cos_theta,case,a,b,witness_re,witness_im,verdict");
}

#[test]
fn sweep_case_column_changes_across_the_double_root() {
    let o = cdsp(&["sweep", "--theta-min", "0.9", "--theta-max", "0.96", "--steps", "3", "--l-max", "12"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let cases: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(cases.first(), Some(&"Collinear"));
    assert_eq!(cases.last(), Some(&"Conjugate"));
}

#[test]
fn sweep_errors() {
    assert_eq!(code(&cdsp(&["sweep", "--theta-min", "2", "--theta-max", "1"])), 1);
    assert_eq!(code(&cdsp(&["sweep", "--theta-min", "0.5", "--steps", "1"])), 1);
    let o = cdsp(&["sweep", "--theta-min", "1", "--theta-max", "1.1", "--steps", "2", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn kernel_at_origin_is_one() {
    let (c, v) = json(&["kernel", "--theta", "1.1", "--z", "0.3,-0.2", "--w", "0,0", "--method", "costara"]);
    assert_eq!(c, 0);
    let (re, im) = pair(&v["values"][0]["value"]);
    assert!((re - 1.0).abs() < 1e-10 && im.abs() < 1e-10);
}

#[test]
fn kernel_all_methods_agree() {
    let (c, v) = json(&["kernel", "--theta", "2.2", "--z", "-0.4,0.35", "--w", "0.1,-0.6"]);
    assert_eq!(c, 0);
    assert_eq!(v["values"].as_array().unwrap().len(), 3);
    assert!(v["discrepancy"].as_f64().unwrap() < 1e-8);
    assert!(v["closed_discrepancy"].as_f64().is_some());
}

#[test]
fn kernel_antipodal_real_axis() {
    let (_, v) = json(&["kernel", "--theta", "pi", "--z", "0.5", "--w", "0.5"]);
    let values: Vec<(f64, f64)> = v["values"].as_array().unwrap().iter().map(|x| pair(&x["value"])).collect();
    for (re, im) in &values {
        assert!(*re > 0.0 && im.abs() < 1e-12);
        assert!((re - values[0].0).abs() < 1e-10);
    }
}

#[test]
fn kernel_outside_domain() {
    assert_eq!(code(&cdsp(&["kernel", "--theta", "1", "--z", "1.2", "--w", "0"])), 1);
}
