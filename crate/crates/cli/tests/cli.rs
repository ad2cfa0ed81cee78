use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nua-sweep"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn single_scenario_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["--K", "0.3", "--w", "1", "--steps", "2", "--out", "a.csv"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scenario,m,w,K,nu,T0,q_abs,N,I");
    assert_eq!(lines.len(), 3);
    let last: Vec<f64> = lines[2].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(&last[..6], &[0.0, 1.0, 1.0, 0.3, 0.3, 10.0]);
    assert!((last[6] - 0.389_50).abs() < 1e-3);
    assert!(dir.path().join("a.csv.manifest.json").exists());
}

#[test]
fn figure_defaults_with_plots_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "--defaults-fig12",
            "--steps",
            "20",
            "--format",
            "json",
            "--out",
            "fig.json",
            "--plot",
            "both",
            "--compare-rindler",
            "--threads",
            "2",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig.json")).unwrap()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 80);
    for name in ["fig_N.svg", "fig_I.svg"] {
        let svg = fs::read_to_string(dir.path().join(name)).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 4);
    }
}

#[test]
fn mass_broadcast_and_negative_times() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "--K", "0.1", "--w", "1", "--K", "0.3", "--w", "5", "--m", "2", "--t0-min", "-3",
            "--t0-max", "-1", "--steps", "3", "--out", "b.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(1) == Some("2")));
}

#[test]
fn bad_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let none = run(dir.path(), &["--out", "c.csv"]);
    assert!(!none.status.success());
    assert!(String::from_utf8_lossy(&none.stderr).contains("no scenarios"));
    let mismatched = run(dir.path(), &["--K", "0.1", "--K", "0.2", "--w", "1"]);
    assert!(!mismatched.status.success());
    assert!(!dir.path().join("c.csv").exists());
}

#[test]
fn help_mentions_units() {
    let out = Command::new(env!("CARGO_BIN_EXE_nua-sweep"))
        .arg("--help")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("natural units"));
}
