use std::f64::consts::PI;

use clap::Parser;
use serde_json::Value;

use e2surf::cli::{run, Cli, RunConfig, VerificationReport};
use e2surf::Error;

fn exec(args: &[&str]) -> e2surf::Result<(i32, String)> {
    let cli = Cli::try_parse_from(std::iter::once("e2surf").chain(args.iter().copied())).expect("arguments parse");
    let mut out = Vec::new();
    let code = run(cli, &mut out)?;
    Ok((code, String::from_utf8(out).unwrap()))
}

fn json(args: &[&str]) -> Value {
    let (code, text) = exec(args).unwrap();
    assert_eq!(code, 0, "{text}");
    serde_json::from_str(&text).unwrap()
}

fn report(args: &[&str]) -> (i32, VerificationReport) {
    let (code, text) = exec(args).unwrap();
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn flat_helicoid_constants() {
    let v = json(&["helicoid", "--K", "0.75"]);
    assert!((v["W"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-10);
    assert_eq!(v["vertices"], 2500);
}

#[test]
fn solve_theta_matches_known_root() {
    let v = json(&["catenoid", "solve-theta", "--c", "2"]);
    assert!((v["theta_tilde"].as_f64().unwrap() - 1.2257630824021037).abs() < 1e-8);
}

#[test]
fn solve_period_round_trips() {
    let v = json(&["helicoid", "solve-period", "--T", "3", "--lambda1", "2"]);
    let k = v["K"].as_f64().unwrap().to_string();
    let back = json(&["helicoid", "--K", &k, "--lambda1", "2", "--nu", "2", "--nv", "2"]);
    assert!((back["period"].as_f64().unwrap() - 3.0).abs() < 1e-8);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"family": "catenoid", "metric": {"lambda1": 2.0}, "parameters": {"c": 5}, "grid": {"nu": 4, "nv": 3}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["catenoid", "--config", p, "--c", "2"]);
    assert_eq!(v["c"], 2.0);
    assert_eq!(v["vertices"], 12);
    assert!(v["H"].as_f64().unwrap().abs() < 1e-10);
    let plain = json(&["catenoid", "--c", "2", "--lambda1", "2"]);
    assert_eq!(v["theta"], plain["theta"]);
}

#[test]
fn metric_order_violation_is_a_config_error() {
    let e = exec(&["helicoid", "--K", "0.5", "--lambda1", "1", "--lambda2", "2"]).unwrap_err();
    assert!(matches!(e, Error::Config { ref field, .. } if field == "metric"), "{e}");
}

#[test]
fn missing_parameter_is_rejected() {
    assert!(matches!(
        exec(&["verify", "--family", "catenoid"]),
        Err(Error::Config { .. })
    ));
}

#[test]
fn flat_catenoid_report() {
    let (code, r) = report(&["verify", "--family", "catenoid", "--c", "2"]);
    assert_eq!(code, 0);
    assert!(r.all_passed());
    let t = r.metadata.theta_tilde.unwrap();
    assert!((t - 1.2257630824021037).abs() < 1e-8);
    assert!(r.metadata.h_residual.unwrap().abs() < 1e-10);
}

#[test]
fn flat_helicoid_report() {
    let (code, r) = report(&["verify", "--family", "helicoid", "--K", "0.75"]);
    assert_eq!(code, 0);
    assert!((r.metadata.w.unwrap() - 2.0 * PI).abs() < 1e-10);
    assert!(r.record("w_flat").unwrap().pass);
}

#[test]
fn report_is_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, text) = exec(&[
        "verify",
        "--family",
        "helicoid",
        "--K",
        "-0.5",
        "--lambda1",
        "2",
        "--report",
        path.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(code, 0);
    let short: Value = serde_json::from_str(&text).unwrap();
    let r: VerificationReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(short["summary"]["total"], r.summary.total);
    assert_eq!(r.config.hash(), r.config_hash);
    let passed = r.records.iter().filter(|x| x.pass).count();
    assert_eq!((r.summary.passed, r.summary.failed), (passed, r.records.len() - passed));
    assert!(r.record("total_curvature_divergence").unwrap().pass);

    // the embedded config reproduces the same report
    let again =
        e2surf::cli::run_verification(&RunConfig::from_json(&serde_json::to_string(&r.config).unwrap()).unwrap());
    assert_eq!(again.config_hash, r.config_hash);
    assert_eq!(again.records, r.records);
}

#[test]
fn wrong_theta_fails_to_close() {
    let (code, r) = report(&[
        "verify",
        "--family",
        "catenoid",
        "--c",
        "2",
        "--theta",
        "0.5",
        "--lambda1",
        "2",
    ]);
    assert_eq!(code, 1);
    for name in ["period_closing", "lattice_periodicity", "section_closed[0]"] {
        assert!(!r.record(name).unwrap().pass, "{name}");
    }
    // the local identities hold for any θ in the admissible range
    for name in [
        "hopf_constant",
        "pde_residual",
        "mean_curvature_fd",
        "reflection_symmetry",
    ] {
        assert!(r.record(name).unwrap().pass, "{name}");
    }
}

#[test]
fn limit_study_output() {
    let v = json(&["limit-study", "--c-list", "10,50", "--shrink-c-list", "2,5"]);
    let dev: Vec<f64> = v["limit"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["deviation"].as_f64().unwrap())
        .collect();
    assert!(dev[1] < dev[0]);
    let radii: Vec<f64> = v["shrink"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["radius"].as_f64().unwrap())
        .collect();
    assert!(radii[1] < radii[0]);
}
