use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weibull-mlqe"))
}

fn glass_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/glass_fibre.txt")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fit_glass_fibre_mlqe() {
    let glass = glass_path();
    let o = run(&["fit", "--data", glass.to_str().unwrap(), "--q", "0.8", "--seed", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "MLqE");
    assert_eq!(v["n"], 63);
    let a = v["alpha_hat"].as_f64().unwrap();
    let b = v["beta_hat"].as_f64().unwrap();
    assert!((a - 7.5423).abs() < 0.10, "{a}");
    assert!((b - 1.6401).abs() < 0.01, "{b}");
    assert!((v["ks_p_value"].as_f64().unwrap() - 0.7283).abs() < 0.05);
}

#[test]
fn fit_writes_report_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let plot = dir.path().join("cdf.csv");
    let glass = glass_path();
    let o = run(&[
        "fit",
        "--data",
        glass.to_str().unwrap(),
        "--mle",
        "--contaminate",
        "outliers",
        "--out",
        out.to_str().unwrap(),
        "--plot-data",
        plot.to_str().unwrap(),
        "--ga",
        "population_size=40,generations=40",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["alpha_hat"].as_f64().unwrap() - 1.46).abs() < 0.05);
    let cdf = fs::read_to_string(&plot).unwrap();
    assert!(cdf.starts_with("x,empirical_cdf,fitted_cdf_mle"));
    assert!(dir.path().join("cdf.hist.csv").exists());
}

#[test]
fn inject_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let glass = glass_path();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("inj{i}.txt"))).collect();
    for p in &paths {
        let o = run(&[
            "inject",
            "--data",
            glass.to_str().unwrap(),
            "--contaminate",
            "both",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let a = fs::read_to_string(&paths[0]).unwrap();
    assert_eq!(a, fs::read_to_string(&paths[1]).unwrap());
    // four outliers and ten inliers
    assert_eq!(a.lines().count(), 63 + 4 + 10);
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let design = dir.path().join("d.toml");
    fs::write(
        &design,
        "epsilon = 0.1\nn = 40\nmethod = \"both\"\nq = 0.84\nseed = 3\n\
         [f0]\nalpha = 4.0\nbeta = 2.0\n[f1]\nfamily = \"weibull\"\nalpha = 1.0\nbeta = 5.0\n",
    )
    .unwrap();
    let args = ["simulate", "--design", design.to_str().unwrap(), "--reps", "6", "--ga", "population_size=30,generations=20"];
    let first = run(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second));
    let text = stdout(&first);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("mse_alpha"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn select_q_reports_the_table_maximum() {
    let glass = glass_path();
    let o = run(&[
        "select-q",
        "--data",
        glass.to_str().unwrap(),
        "--q-grid",
        "0.7:0.9:0.1",
        "--ga",
        "population_size=40,generations=40",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let (table, report) = text.split_at(text.find('{').unwrap());
    let best = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(4).unwrap().parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let v: Value = serde_json::from_str(report).unwrap();
    assert!((v["ks_p_value"].as_f64().unwrap() - best).abs() < 1e-6);
}

#[test]
fn exit_codes() {
    let glass = glass_path();
    let g = glass.to_str().unwrap();
    // neither --mle nor --q
    assert_eq!(run(&["fit", "--data", g]).status.code(), Some(2));
    // --mle conflicts with --q
    assert_eq!(run(&["fit", "--data", g, "--mle", "--q", "0.8"]).status.code(), Some(2));
    assert_eq!(run(&["fit", "--data", "/nonexistent/file", "--mle"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1.0\nabc\n").unwrap();
    assert_eq!(run(&["fit", "--data", bad.to_str().unwrap(), "--mle"]).status.code(), Some(3));
    assert_eq!(run(&["fit", "--data", g, "--q", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
