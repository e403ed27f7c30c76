use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_interaction-minimiser"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).arg("--output-dir").arg(dir).output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const MORSE: &[&str] = &["--potential", "morse", "--cr", "1", "--ca", "2", "--lr", "0.5", "--la", "1", "--dim", "2"];

#[test]
fn classify_unstable_morse() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[&["classify"], MORSE].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict unstable"));
    let report = read_json(&dir.path().join("classify.json"));
    assert_eq!(report["stability"]["verdict"], "unstable");
    assert_eq!(report["config"]["potential"]["family"], "morse");
    assert_eq!(report["profile"]["value_at_infinity"], 0.0);
}

#[test]
fn classify_reports_infinite_limits_as_strings() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["classify", "--potential", "power_law", "--a", "2", "--b", "-1", "--dim", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.path().join("classify.json"));
    assert_eq!(report["stability"]["value_at_infinity"], "+inf");
    assert_eq!(report["profile"]["value_at_origin"], "+inf");
}

#[test]
fn bounds_on_stable_potential_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bounds", "--potential", "morse", "--cr", "3", "--ca", "1", "--lr", "1", "--la", "1.2", "--dim", "2"];
    let out = run(&args, dir.path());
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    let line: Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(line["kind"], "computation");
    assert!(line["message"].as_str().unwrap().contains("instability not established"));
}

#[test]
fn bounds_for_unstable_morse() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[&["bounds"], MORSE].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let b = &read_json(&dir.path().join("bounds.json"))["bounds"];
    assert_eq!(b["r6"], 0.0);
    assert!(b["k"].as_f64().unwrap() > 0.0);
    assert!(b["soundness_note"].as_str().unwrap().contains("upper bound"));
}

#[test]
fn certify_random_configuration_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let particles = dir.path().join("random.csv");
    std::fs::write(&particles, "x1,x2,w\n0,0,0.5\n3,1,0.25\n-1,4,0.25\n").unwrap();
    let args = ["certify", "--potential", "power_law", "--a", "2", "--b", "0", "--dim", "2", "--particles"];
    let out = bin()
        .args(args)
        .arg(&particles)
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let cert = &read_json(&dir.path().join("certificate.json"))["certificate"];
    assert_eq!(cert["passes"]["el"], false);
    assert!(!cert["violations"].as_array().unwrap().is_empty());
}

#[test]
fn minimised_particles_round_trip_and_certify() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[&["minimise", "--n", "40", "--restarts", "2", "--grad-tol", "1e-10"], MORSE].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("particles.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x1,x2,w"));
    for line in lines {
        for field in line.split(',') {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:?}"), field);
        }
    }
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("iter,energy,grad_norm,dt\n"));
    let energies: Vec<f64> = trace.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(energies.windows(2).all(|w| w[1] <= w[0]));

    let out = bin()
        .args([&["certify", "--particles"][..], &[dir.path().join("particles.csv").to_str().unwrap()], MORSE].concat())
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = &read_json(&dir.path().join("certificate.json"))["certificate"];
    assert_eq!(cert["passes"]["gaps"], true);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [&["minimise", "--n", "24", "--restarts", "3", "--seed", "7"], MORSE].concat();
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    let first = std::fs::read(dir.path().join("result.json")).unwrap();
    let particles = std::fs::read(dir.path().join("particles.csv")).unwrap();
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    assert_eq!(first, std::fs::read(dir.path().join("result.json")).unwrap());
    assert_eq!(particles, std::fs::read(dir.path().join("particles.csv")).unwrap());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"potential": {"family": "power_law", "params": {"a": 2, "b": 0}, "dimension": 2},
            "minimise": {"n": 16, "restarts": 1, "seed": 3}}"#,
    )
    .unwrap();
    let out = bin()
        .args(["minimise", "--config"])
        .arg(&config)
        .args(["--n", "12"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let result = read_json(&dir.path().join("result.json"));
    assert_eq!(result["config"]["minimise"]["n"], 12);
    assert_eq!(result["config"]["minimise"]["seed"], 3);
    let rows = std::fs::read_to_string(dir.path().join("particles.csv")).unwrap().lines().count();
    assert_eq!(rows, 13);
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"potential": {"family": "gaussian_bump", "dimension": 2}, "minimse": {}}"#).unwrap();
    let out = bin().args(["classify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&config, r#"{"potential": {"family": "morse", "params": {"c_r": 1, "c_a": 2, "ell_r": 1, "ell_a": 2, "extra": 1}, "dimension": 2}}"#).unwrap();
    let out = bin().args(["classify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_potential_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["classify", "--potential", "power_law", "--a", "1", "--b", "2", "--dim", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_default_grid_agrees_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--dims", "1,2,3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("dimension,c_r,c_a,ell_r,ell_a,integral,verdict,criterion,agree"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 300);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn sweep_degenerate_cell_and_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--length-min", "1", "--length-max", "1", "--length-steps", "1", "--ratio-min", "0.5", "--ratio-max", "0.5", "--ratio-steps", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    // sigma_1 Gamma(2) ell^2 (C_R - C_A) = 2 pi (0.5 - 1)
    let integral: f64 = row[5].parse().unwrap();
    assert!((integral + std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(row[7], "false");

    let out = run(&["sweep", "--ratio-steps", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv, "dimension,c_r,c_a,ell_r,ell_a,integral,verdict,criterion,agree\n");

    let out = run(&["sweep", "--ratio-steps", "200", "--length-steps", "100"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flow_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[&["flow", "--n", "16", "--dt", "0.05", "--t-end", "2"], MORSE].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let flow = &read_json(&dir.path().join("result.json"))["flow"];
    assert!(flow["com_drift"].as_f64().unwrap() < 1e-10);
    let traj = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("step,time,particle,x1,x2\n"));
}

#[test]
fn thread_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("INTERACTION_MINIMISER_THREADS", "zero")
        .args([&["classify"], MORSE].concat())
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .env("INTERACTION_MINIMISER_THREADS", "1")
        .args([&["classify"], MORSE].concat())
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
