use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use etur_core::catalog::{emit, standard_catalog, ReportFormat};
use etur_core::{run_suite, BoundFilter, DecayTimes, EnergyDistribution, SurvivalAmplitude};
use serde_json::Value;

fn etur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etur")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    match v {
        Value::String(s) if s == "inf" => f64::INFINITY,
        v => v.as_f64().unwrap(),
    }
}

#[test]
fn extremal_prints_the_constant() {
    let o = etur(&["extremal"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("mu = 0.29505306\n"), "{}", stdout(&o));
}

#[test]
fn extremal_tables_are_truncated_and_compared() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("F.csv");
    let sig = dir.path().join("f.csv");
    let o = etur(&[
        "extremal",
        "--compare-gaussian",
        "--omega-max",
        "4",
        "--format",
        "csv",
        "--out",
        spec.to_str().unwrap(),
        "--signal-out",
        sig.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&spec).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,F,F_gauss"));
    let last: f64 = text.lines().last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!(last <= 4.0 && last > 3.9, "{last}");
    assert!(std::fs::read_to_string(&sig).unwrap().starts_with("t,f,f_gauss\n"));
}

#[test]
fn lorentzian_table() {
    let o = etur(&["decay", "lorentzian", "--E0", "0", "--gamma", "2"]);
    assert!(o.status.success());
    let v = json(&o);
    let t = &v["times"];
    assert!(num(&t["delta_e"]).is_infinite());
    assert!((num(&t["tau0"]) - 0.5).abs() < 1e-9);
    assert!((num(&t["tau_tilde"]) - 2f64.sqrt() / 2.0).abs() < 1e-9);
    assert!((num(&t["epsilon"]) - 1.0).abs() < 1e-9);
}

#[test]
fn decay_matches_the_library() {
    let o = etur(&["decay", "gaussian", "--deltaE", "1"]);
    assert!(o.status.success());
    let p = EnergyDistribution::gaussian(0.0, 1.0).unwrap();
    let q = SurvivalAmplitude::for_distribution(&p).unwrap();
    let times = DecayTimes::compute(&p, &q).unwrap();
    assert_eq!(json(&o)["times"], serde_json::to_value(times).unwrap());
    assert!((num(&json(&o)["times"]["tau0"]) - PI.sqrt() / 2.0).abs() < 1e-9);
}

#[test]
fn hbar_rescales_times() {
    let one = json(&etur(&["decay", "gaussian"]));
    let two = json(&etur(&["decay", "gaussian", "--hbar", "2"]));
    for key in ["tau0", "t_half", "tau_star", "tau_2star", "tau_tilde", "tau1", "delta1t"] {
        let (a, b) = (num(&one["times"][key]), num(&two["times"][key]));
        assert!((b - 2.0 * a).abs() < 1e-9 * a, "{key}: {a} {b}");
    }
    for key in ["delta_e", "delta_e_star", "epsilon"] {
        assert_eq!(one["times"][key], two["times"][key], "{key}");
    }
}

#[test]
fn sampled_distribution_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("P.csv");
    let mut text = String::from("E,P\n");
    let n = 801;
    let edge = 5f64.sqrt();
    for i in 0..n {
        let e = -edge + 2.0 * edge * i as f64 / (n - 1) as f64;
        text.push_str(&format!("{e},{}\n", (3.0 / (4.0 * edge) * (1.0 - e * e / 5.0)).max(0.0)));
    }
    std::fs::write(&path, text).unwrap();
    let o = etur(&["decay", "sampled", "--in", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let product = num(&v["times"]["tau0"]) * num(&v["times"]["delta_e"]);
    assert!((product - 3.0 * PI / (5.0 * 5f64.sqrt())).abs() < 1e-4, "{product}");
}

#[test]
fn wigner_presets() {
    let v = json(&etur(&["wigner", "--preset", "coherent", "--displacement", "2"]));
    assert!((num(&v["product"]) - 1.0).abs() < 1e-9);
    let v = json(&etur(&["wigner", "--preset", "thermal", "--nbar", "1"]));
    assert!(num(&v["t0"]).is_infinite());
    assert!((num(&v["purity"]) - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn wigner_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("s.json");
    std::fs::write(
        &good,
        r#"{"q_mean": 0.3, "p_mean": -1.0, "sigma_q": 0.8, "sigma_p": 0.6, "sigma_qp": 0.1,
            "mass": 1.0, "omega": 1.5, "hbar": 1.0}"#,
    )
    .unwrap();
    let o = etur(&["wigner", "--in", good.to_str().unwrap(), "--preset", "coherent"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(num(&v["state"]["sigma_q"]), 0.8);
    assert_eq!(v["bounds"]["summary"]["violated"], 0);

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"q_mean": 0, "p_mean": 0, "sigma_q": 0.1, "sigma_p": 0.1, "sigma_qp": 0,
            "mass": 1, "omega": 1, "hbar": 1}"#,
    )
    .unwrap();
    assert_eq!(etur(&["wigner", "--in", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn suite_filter_matches_the_library() {
    let o = etur(&["suite", "--only", "Gislason"]);
    assert_eq!(o.status.code(), Some(0));
    let cat = standard_catalog().unwrap();
    let r = run_suite(&cat, &BoundFilter::only(["Gislason"]).unwrap()).unwrap();
    assert_eq!(stdout(&o), emit(&r, ReportFormat::Json).unwrap());
}

#[test]
fn full_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = etur(&["suite", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("entry,family,bound,status,"));
    assert!(!text.contains(",violated,"));
}

#[test]
fn zero_tolerance_flags_saturated_bounds() {
    // The two-level system saturates the speed limits, so rounding alone
    // puts some slacks below zero.
    let o = etur(&["speed", "two-point", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(json(&o)["summary"]["violated"].as_u64().unwrap() > 0);
    assert_eq!(etur(&["speed", "two-point"]).status.code(), Some(0));
}

fn no_files(dir: &Path) -> bool {
    std::fs::read_dir(dir).unwrap().next().is_none()
}

#[test]
fn usage_errors_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o_str = out.to_str().unwrap();
    assert_eq!(etur(&["suite", "--bogus", "--out", o_str]).status.code(), Some(1));
    assert_eq!(etur(&["suite", "--only", "Nope", "--out", o_str]).status.code(), Some(1));
    assert_eq!(etur(&["decay", "--out", o_str]).status.code(), Some(1));
    assert_eq!(etur(&["decay", "sampled", "--in", "/nonexistent/P.csv", "--out", o_str]).status.code(), Some(1));
    assert_eq!(etur(&["decay", "gaussian", "--deltaE", "-1", "--out", o_str]).status.code(), Some(1));
    assert_eq!(etur(&["wigner", "--hbar", "0", "--preset", "coherent", "--out", o_str]).status.code(), Some(1));
    assert!(no_files(dir.path()));
}

#[test]
fn transform_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("f.csv");
    let spec = dir.path().join("F.csv");
    let back = dir.path().join("g.json");
    let mut text = String::from("t,f\n");
    let n = 241;
    let ts: Vec<f64> = (0..n).map(|i| -12.0 + 0.1 * i as f64).collect();
    let f = |t: f64| (-t * t / 2.0).exp() * (1.0 + 0.3 * t);
    for &t in &ts {
        text.push_str(&format!("{t},{}\n", f(t)));
    }
    std::fs::write(&sig, text).unwrap();
    let o = etur(&["transform", "--to", "spectrum", "--in", sig.to_str().unwrap(), "--format", "csv", "--out", spec.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = etur(&[
        "transform", "--to", "signal", "--in", spec.to_str().unwrap(), "--t-max", "12", "--n-t", "241", "--out",
        back.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(num).collect();
    let norm = (ts.iter().map(|&t| f(t) * f(t)).sum::<f64>() * 0.1).sqrt();
    let worst = ts.iter().zip(&values).map(|(&t, g)| (f(t) / norm - g).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn amplitude_of_a_gaussian() {
    let o = etur(&["transform", "--to", "amplitude", "gaussian", "--t-max", "3", "--n-t", "31", "--format", "csv"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((cols[3] - (-cols[0] * cols[0]).exp()).abs() < 1e-12, "{line}");
    }
}
