use std::collections::HashSet;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anyon1d"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_spinon_reports_ten_scattering_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["verify", "spinon", "--n", "8", "--tol", "1e-9", "--out", "r.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = read_json(&dir.path().join("r.json"));
    let checks = doc["checks"].as_array().unwrap();
    let scattering = checks
        .iter()
        .filter(|c| c["name"].as_str().unwrap().contains("scattering("))
        .count();
    assert_eq!(scattering, 10);
    assert_eq!(doc["pass"], Value::Bool(true));
    assert_eq!(doc["command"], "verify spinon");
    assert_eq!(doc["config"]["tol"], 1e-9);
    for key in ["tool_version", "command", "config", "checks", "pass", "elapsed_seconds"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn json_report_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "ground", "--n", "6", "--out", "g.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("g.json")).unwrap();
    let parsed: Value = serde_json::from_str(&text).unwrap();
    let mut emitted = serde_json::to_string_pretty(&parsed).unwrap();
    emitted.push('\n');
    assert_eq!(emitted, text);
}

#[test]
fn count_prints_total() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["count", "--n", "24"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("16777216"));
}

#[test]
fn quantize_half_fermion_spacing() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["quantize", "--theta", "1.5707963", "--length", "6.2831853", "--k", "3"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.500000, 1.500000, 2.500000"), "{}", stdout(&o));
    let o = run(
        dir.path(),
        &["quantize", "--theta-over-pi", "1/2", "--length", "4", "--k", "2"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.500000, 1.500000"), "{}", stdout(&o));
}

#[test]
fn spectrum_csv_has_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "spectrum",
            "--n",
            "6",
            "--species",
            "spinon",
            "--format",
            "csv",
            "--out",
            "s.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sector_Q,sector_Mup,index,energy,momentum_K"));
    // Two spinons at N=6 live in the sector with 2 up spins out of 6 electrons.
    assert_eq!(lines.count(), 15);
}

#[test]
fn iterative_spectrum_agrees_with_dense() {
    let dir = tempfile::tempdir().unwrap();
    let dense = run(
        dir.path(),
        &[
            "spectrum", "--n", "8", "--holes", "2", "--format", "csv", "--out", "d.csv",
        ],
    );
    let iter = run(
        dir.path(),
        &[
            "spectrum",
            "--n",
            "8",
            "--holes",
            "2",
            "--mode",
            "iterative",
            "--k",
            "3",
            "--format",
            "csv",
            "--out",
            "i.csv",
        ],
    );
    assert_eq!(dense.status.code(), Some(0), "{}", stderr(&dense));
    assert_eq!(iter.status.code(), Some(0), "{}", stderr(&iter));
    let energies = |name: &str| -> Vec<f64> {
        let mut r = csv::Reader::from_path(dir.path().join(name)).unwrap();
        r.records().map(|row| row.unwrap()[3].parse().unwrap()).collect()
    };
    let d = energies("d.csv");
    let i = energies("i.csv");
    assert_eq!(i.len(), 3);
    for (a, b) in i.iter().zip(&d) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn check_names_are_unique() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["suite", "--max-n", "6", "--out", "suite.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = read_json(&dir.path().join("suite.json"));
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let unique: HashSet<&str> = names.iter().copied().collect();
    assert_eq!(unique.len(), names.len());
    assert!(names.len() > 100);

    let o = run(dir.path(), &["verify", "ground", "--n", "4", "--out", "g.json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = read_json(&dir.path().join("g.json"));
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.iter().copied().collect::<HashSet<_>>().len(), names.len());
}

#[test]
fn failing_check_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["verify", "spinon", "--n", "6", "--tol", "1e-300", "--out", "f.json"],
    );
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("FAIL N=6/scattering("), "{err}");
    assert!(err.contains("value "), "{err}");
    let doc = read_json(&dir.path().join("f.json"));
    assert_eq!(doc["pass"], Value::Bool(false));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "ground", "--n", "4", "--tol=-1"],
        vec!["verify", "ground", "--n", "4", "--tol", "NaN"],
        vec!["verify", "ground", "--n", "4", "--dense-limit", "0"],
        vec!["verify", "ground", "--n", "4", "--threads", "0"],
        vec!["verify", "ground", "--n", "0"],
        vec!["verify", "spinon", "--n", "7"],
        vec!["gram", "--n", "4"],
        vec!["quantize", "--theta-over-pi", "one half", "--plane"],
        vec!["quantize", "--theta", "1.0"],
        vec!["spectrum", "--n", "4", "--holes", "5"],
        vec!["count"],
        vec!["frobnicate"],
    ] {
        let o = run(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn capacity_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["spectrum", "--n", "8", "--dense-limit", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("capacity"), "{}", stderr(&o));
}

#[test]
fn writes_only_the_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "holon", "--n", "6", "--spectrum"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    std::fs::create_dir(dir.path().join("out")).unwrap();
    let o = run(
        dir.path(),
        &["fit-shift", "--n", "8", "--species", "spinon", "--out", "out/fit.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let top: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(top, vec!["out"]);
    let inner: Vec<_> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(inner, vec!["fit.json"]);
}

#[test]
fn checks_csv_for_non_spectrum_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["gram", "--n", "5", "--format", "csv", "--out", "g.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert!(text.starts_with("name,pass,value,tolerance,details\n"));
    assert!(text.contains("N=5/spinon_rank,true"));
}

#[test]
fn seed_makes_reports_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |v: &mut Value| v.as_object_mut().unwrap().remove("elapsed_seconds");
    let mut docs = Vec::new();
    for name in ["a.json", "b.json"] {
        let o = run(
            dir.path(),
            &[
                "verify",
                "ground",
                "--n",
                "6",
                "--seed",
                "7",
                "--threads",
                "1",
                "--out",
                name,
            ],
        );
        assert_eq!(o.status.code(), Some(0));
        let mut v = read_json(&dir.path().join(name));
        strip(&mut v);
        docs.push(v);
    }
    assert_eq!(docs[0], docs[1]);
}
