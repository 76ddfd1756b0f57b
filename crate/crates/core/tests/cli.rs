use std::path::PathBuf;
use std::process::{Command, Output};

use eigenseq::{gate, Gate, Matrix};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eigenseq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn iterate_sigma_x_emits_hadamard_and_hamiltonian() {
    let out = run(&["iterate", "--gate", "sigmax", "--max-iter", "60", "--emit", "hamiltonians"]);
    let json = stdout_json(&out);
    let states = json["states"].as_array().unwrap();
    let u1: Matrix = serde_json::from_value(states[1]["u"].clone()).unwrap();
    assert!(u1.max_abs_diff(&gate(Gate::Hadamard)) < 1e-15);
    let h0: Matrix = serde_json::from_value(states[0]["hamiltonian"].clone()).unwrap();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let want = Matrix::from_real_rows(&[[-half_pi, half_pi], [half_pi, -half_pi]]);
    assert!(h0.max_abs_diff(&want) < 1e-12);
    assert!(states[0]["hs_dist_prev"].is_null());
    assert_eq!(json["report"]["converged"], true);
}

#[test]
fn distance_of_file_to_itself_is_zero() {
    let path = scratch("hadamard.json");
    std::fs::write(&path, serde_json::to_string(&gate(Gate::Hadamard)).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let json = stdout_json(&run(&["distance", "--a", p, "--b", p]));
    assert_eq!(json["hs"], 0.0);
    assert_eq!(json["d"], 0.0);
}

#[test]
fn frame_output_round_trips_bit_for_bit() {
    let json = stdout_json(&run(&["frame", "--gate", "phase:0.7"]));
    let f: Matrix = serde_json::from_value(json["columns"].clone()).unwrap();
    let path = scratch("frame.json");
    std::fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
    let out = run(&["compose", "--kind", "direct-sum", "--a", path.to_str().unwrap(), "--b", "sigmaz"]);
    let m: Matrix = serde_json::from_slice(&out.stdout).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(m[(i, j)].re.to_bits(), f[(i, j)].re.to_bits());
            assert_eq!(m[(i, j)].im.to_bits(), f[(i, j)].im.to_bits());
        }
    }
    let cayley = run(&["cayley", "--gate", "hadamard", "--from-unitary", "--format", "json"]);
    let v: Matrix = serde_json::from_slice(&cayley.stdout).unwrap();
    let again: Matrix = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn sweep_rows_converge_to_sigma_z() {
    let out = run(&["sweep", "--steps", "32"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("a,b_sign,steps,final_distance,re_limit_1_1"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 32);
    let sz = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0];
    for row in &rows {
        assert_eq!(row[1], 1.0);
        let dist = row[4..].iter().zip(sz).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        assert!(dist <= 1e-8, "a = {} limit off by {dist}", row[0]);
    }
}

#[test]
fn sweep_negative_sign_is_recorded() {
    let out = run(&["sweep", "--steps", "4", "--b-sign", "both"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let signs: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(signs, ["1", "-1", "1", "-1", "1", "-1", "1", "-1"]);
}

#[test]
fn csv_trace_has_header_and_one_row_per_step() {
    let out = run(&["iterate", "--gate", "sigmax", "--max-iter", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,,,"));
}

#[test]
fn domain_error_exits_one_with_error_object() {
    let out = run(&["iterate", "--gate", "phase:0"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).expect("machine-readable error");
    assert_eq!(err["error"]["kind"], "domain");
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(run(&["frame", "--gate", "no-such-gate"]).status.code(), Some(2));
    assert_eq!(run(&["iterate", "--gate", "sigmax", "--max-iter", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));

    let path = scratch("broken.json");
    std::fs::write(&path, r#"{"n": 2, "entries": [[[1, 0]]]}"#).unwrap();
    let out = run(&["frame", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "input");
    assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        &["iterate", "--gate", "sigmay", "--max-iter", "50", "--emit", "frames,cayleys,spectra"][..],
        &["sweep", "--steps", "16", "--b-sign", "both"][..],
        &["distributivity", "--kind", "kronecker", "--a", "hadamard", "--b", "sigmay"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("out.json");
    let out = run(&["hamiltonian", "--gate", "sigmaz", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let h: Matrix = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((h[(1, 1)].re + std::f64::consts::PI).abs() < 1e-15);
}
