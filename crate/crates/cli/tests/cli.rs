use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use threewave_cli::report::{RunReport, SCHEMA, SCHEMA_VERSION};
use threewave_cli::ExperimentConfig;
use threewave_core::reduction::phi;
use threewave_core::symmetry::wrap_to_pi;
use threewave_core::{act, momentum, GroupElement, LeafPoint};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_threewave"))
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn phases_report(config: &Path) -> RunReport {
    let o = run(&["phases"], config);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn angle_gap(a: [f64; 2], b: [f64; 2]) -> f64 {
    (0..2).map(|i| wrap_to_pi(a[i] - b[i]).abs()).fold(0.0, f64::max)
}

#[test]
fn default_phases_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let r = phases_report(&cfg);
    assert_eq!(r.schema, SCHEMA);
    assert_eq!(r.schema_version, SCHEMA_VERSION);
    assert_eq!(r.config, ExperimentConfig::default());
    assert!(r.phases.decomposition_residual < 1e-6);
    assert!(r.phases.dynamic_route_gap < 1e-6);
    assert!(r.checks.iter().all(|c| c.pass), "{:?}", r.checks);
    for t in [r.phases.theta_dyn, r.phases.theta_geom, r.phases.theta_total, r.surface.theta_geom] {
        assert!(t.iter().all(|a| (0.0..std::f64::consts::TAU).contains(a)), "{t:?}");
    }
}

#[test]
fn gauge_shift_leaves_phases_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let base = ExperimentConfig::default();
    let q = act(&GroupElement::new([0.7, -1.3]), &base.q0());
    let shifted = ExperimentConfig {
        q1_re: q.0[0].re,
        q1_im: q.0[0].im,
        q2_re: q.0[1].re,
        q2_im: q.0[1].im,
        q3_re: q.0[2].re,
        q3_im: q.0[2].im,
        ..base
    };
    let a = phases_report(&write_config(dir.path(), "a.json", "{}"));
    let b = phases_report(&write_config(dir.path(), "b.json", &serde_json::to_string(&shifted).unwrap()));
    assert!((a.period - b.period).abs() < 1e-8);
    assert!(angle_gap(a.phases.theta_dyn, b.phases.theta_dyn) < 1e-8);
    assert!(angle_gap(a.phases.theta_geom, b.phases.theta_geom) < 1e-8);
    assert!(angle_gap(a.phases.theta_total, b.phases.theta_total) < 1e-8);
}

#[test]
fn phases_output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"mesh": 0}"#);
    let out: Vec<String> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("r{i}.json"));
            let o = bin().arg("phases").arg("--config").arg(&cfg).arg("--out").arg(&path).output().unwrap();
            assert_eq!(o.status.code(), Some(0));
            assert!(o.stdout.is_empty());
            std::fs::read_to_string(path).unwrap()
        })
        .collect();
    assert_eq!(out[0], out[1]);
    let r: RunReport = serde_json::from_str(&out[0]).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out[0]);
}

#[test]
fn equilibrium_is_not_periodic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"q2_re": 0, "q3_re": 0, "q3_im": 0}"#);
    assert_eq!(run(&["phases"], &cfg).status.code(), Some(4));
    assert_eq!(run(&["surface"], &cfg).status.code(), Some(4));
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    for (json, field) in [
        (r#"{"gamma": [1, 0, 1]}"#, "gamma"),
        (r#"{"gamma": [1, 1, -2]}"#, "gamma"),
        (r#"{"q3_im": "0.2"}"#, "q3_im"),
        (r#"{"signs": [1, 2, 1]}"#, "signs"),
        (r#"{"t_max": 0}"#, "t_max"),
        (r#"{"q1": 1}"#, "q1"),
    ] {
        let cfg = write_config(dir.path(), "c.json", json);
        for cmd in ["simulate", "phases", "verify", "surface"] {
            let o = run(&[cmd], &cfg);
            assert_eq!(o.status.code(), Some(2), "{cmd} {json}");
            let err = String::from_utf8_lossy(&o.stderr);
            assert!(err.contains(field), "{err}");
        }
    }
    let o = run(&["simulate"], &dir.path().join("missing.json"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mesh_flag_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let o = run(&["surface", "--mesh", "9"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mesh"));
}

#[test]
fn simulate_equilibrium_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"q2_re": 0, "q3_re": 0, "q3_im": 0, "t_max": 5}"#);
    let o = run(&["simulate", "--samples", "20"], &cfg);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header.len(), 17);
    assert_eq!(rows.len(), 21);
    for r in &rows {
        assert_eq!(r[1..], rows[0][1..]);
    }
}

#[test]
fn simulate_default_drift_is_bounded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let o = run(&["simulate", "--samples", "200"], &cfg);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(
        header,
        [
            "t", "q1_re", "q1_im", "q2_re", "q2_im", "q3_re", "q3_im", "H", "K1", "K2", "X", "Y", "Z1", "Z2", "C1",
            "C2", "phi"
        ]
    );
    assert_eq!(rows.len(), 201);
    assert_eq!(num(&rows[200][0]), 50.0);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let drift = |name: &str| {
        let c = col(name);
        let v0 = num(&rows[0][c]);
        rows.iter().map(|r| (num(&r[c]) - v0).abs()).fold(0.0, f64::max)
    };
    // the integrator tolerance is 1e-11 over roughly sixteen periods
    for name in ["H", "K1", "K2", "X"] {
        assert!(drift(name) < 1e-8, "{name}: {}", drift(name));
    }
    for name in ["C1", "C2", "phi"] {
        let c = col(name);
        assert!(rows.iter().all(|r| num(&r[c]).abs() < 1e-8), "{name}");
    }
}

fn surface_rows(cfg: &Path, extra: &[&str]) -> Vec<Vec<String>> {
    let mut args = vec!["surface"];
    args.extend_from_slice(extra);
    let o = run(&args, cfg);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header, ["kind", "id", "vertex", "X", "Y", "Z2"]);
    rows
}

#[test]
fn surface_lies_on_the_leaf() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let base = ExperimentConfig::default();
    let (k, mu) = (base.kahler(), momentum(&base.kahler(), &base.q0()));
    let max_phi = |rows: &[Vec<String>]| {
        rows.iter().map(|r| phi(&k, &LeafPoint::new(num(&r[3]), num(&r[4]), num(&r[5]), mu)).abs()).fold(0.0, f64::max)
    };
    let coarse = surface_rows(&cfg, &["--mesh", "0", "--samples", "50"]);
    let fine = surface_rows(&cfg, &["--mesh", "1", "--samples", "50"]);
    assert!(fine.len() > coarse.len());
    for rows in [&coarse, &fine] {
        assert!(max_phi(rows) < 1e-8, "{}", max_phi(rows));
        let orbit: Vec<_> = rows.iter().filter(|r| r[0] == "orbit").collect();
        assert_eq!(orbit.len(), 51);
        // closed polyline
        for (a, b) in orbit[0][3..].iter().zip(&orbit[50][3..]) {
            assert!((num(a) - num(b)).abs() < 1e-6);
        }
        assert!(rows.iter().filter(|r| r[0] == "triangle").count() % 3 == 0);
    }
}

#[test]
fn surface_with_leaf_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"mu": [1, 1]}"#);
    let rows = surface_rows(&cfg, &["--mesh", "0"]);
    let k = ExperimentConfig::default().kahler();
    let mu = threewave_core::MomentumValue([1.0, 1.0]);
    for r in &rows {
        assert!(phi(&k, &LeafPoint::new(num(&r[3]), num(&r[4]), num(&r[5]), mu)).abs() < 1e-8);
    }
    let infeasible = write_config(dir.path(), "bad.json", r#"{"mu": [-1, -1]}"#);
    assert_eq!(run(&["surface"], &infeasible).status.code(), Some(3));
}

fn verdicts(text: &str) -> Vec<(String, String)> {
    text.lines()
        .skip(1)
        .filter_map(|l| {
            let name = l.split_whitespace().next()?;
            let verdict = if l.contains("PASS") {
                "PASS"
            } else if l.contains("FAIL") {
                "FAIL"
            } else {
                return None;
            };
            Some((name.to_string(), verdict.to_string()))
        })
        .collect()
}

#[test]
fn verify_passes_and_is_seed_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for seed in [0, 7] {
        let cfg = write_config(dir.path(), "c.json", &format!(r#"{{"seed": {seed}}}"#));
        let o = run(&["verify", "--samples", "100"], &cfg);
        let text = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{text}");
        tables.push(verdicts(&text));
    }
    assert!(tables[0].len() > 10);
    assert_eq!(tables[0], tables[1]);
}

#[test]
fn verify_reports_failure_on_a_non_periodic_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"q2_re": 0, "q3_re": 0, "q3_im": 0}"#);
    let o = run(&["verify", "--samples", "20"], &cfg);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
