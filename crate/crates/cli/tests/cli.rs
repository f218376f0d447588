use std::path::Path;
use std::process::{Command, Output};

use kl_pdhg::{solve, PenaltyParams, SolveConfig};
use kl_pdhg_cli::bench::{generate, BenchSpec};
use kl_pdhg_cli::io::{load_dataset, write_csv, write_svmlight, Format};
use kl_pdhg_cli::output::{PathOutput, SolveOutput};
use tempfile::TempDir;

const FIXTURE: &str = "1 1:2.0 3:1.0\n0 2:-1.0\n";

fn klpdhg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klpdhg"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn solve_above_lambda_max_gives_empty_coefficients() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "fx.svm", FIXTURE);
    let out = klpdhg(&["solve", "--input", &f, "--alpha", "0.5", "--lambda", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "theta",
        "objective",
        "iterations",
        "final_residual",
        "kkt",
        "converged",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v.get("residual_history").is_none());
    assert_eq!(v["theta"].as_array().unwrap().len(), 0);
}

#[test]
fn solve_output_is_sparse_and_traceable() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "fx.svm", FIXTURE);
    let out = klpdhg(&[
        "solve", "--input", &f, "--alpha", "0.5", "--lambda", "0.2", "--trace",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: SolveOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.converged);
    assert!(r.theta.iter().all(|c| c.value != 0.0));
    assert_eq!(r.residual_history.unwrap().len(), r.iterations);

    let out = klpdhg(&[
        "solve",
        "--input",
        &f,
        "--alpha",
        "0.5",
        "--lambda",
        "0.2",
        "--output-format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,value\n"));
    assert_eq!(text.lines().count(), r.theta.len() + 1);
}

#[test]
fn path_csv_has_one_row_per_lambda() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "fx.svm", FIXTURE);
    let out = klpdhg(&[
        "path",
        "--input",
        &f,
        "--alpha",
        "0.5",
        "--nlambda",
        "5",
        "--output-format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap().len(), 5 + 3);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0]
        .iter()
        .skip(5)
        .all(|v| v.parse::<f64>().unwrap() == 0.0));

    let out = klpdhg(&["path", "--input", &f, "--alpha", "1", "--nlambda", "4"]);
    let p: PathOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(p.entries.len(), 4);
    assert!(!p.partial);
}

#[test]
fn non_convergence_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "fx.svm", FIXTURE);
    let out = klpdhg(&[
        "solve",
        "--input",
        &f,
        "--alpha",
        "0.5",
        "--lambda",
        "0.01",
        "--max-iter",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let r: SolveOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!r.converged);
    let out = klpdhg(&[
        "path",
        "--input",
        &f,
        "--alpha",
        "0.5",
        "--nlambda",
        "3",
        "--max-iter",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_exit_with_one_and_a_message() {
    let dir = TempDir::new().unwrap();
    let bad = fixture(&dir, "bad.svm", "1 1:1\n0 2:1\n2 1:1\n");
    let empty = fixture(&dir, "empty.csv", "");
    let broken = fixture(&dir, "broken.svm", "1 1:1\n0 2-1\n");
    for args in [
        vec!["solve", "--input", &bad, "--alpha", "0.5", "--lambda", "1"],
        vec![
            "solve", "--input", &empty, "--alpha", "0.5", "--lambda", "1",
        ],
        vec![
            "solve", "--input", &broken, "--alpha", "0.5", "--lambda", "1",
        ],
        vec![
            "solve",
            "--input",
            "/nonexistent/file",
            "--alpha",
            "0.5",
            "--lambda",
            "1",
        ],
        vec!["solve", "--input", &bad, "--alpha", "1.5", "--lambda", "1"],
    ] {
        let out = klpdhg(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
    let out = klpdhg(&[
        "solve", "--input", &broken, "--alpha", "0.5", "--lambda", "1",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn check_accepts_solve_output() {
    let dir = TempDir::new().unwrap();
    let f = fixture(
        &dir,
        "fx.csv",
        "1,2,0.5,1\n-1,0,1,0\n0.3,-2,1,1\n2,1,-1,0\n",
    );
    let coef = dir.path().join("coef.json");
    let c = coef.to_str().unwrap();
    let out = klpdhg(&[
        "solve", "--input", &f, "--alpha", "0.7", "--lambda", "0.05", "--out", c,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = klpdhg(&[
        "check",
        "--input",
        &f,
        "--coefficients",
        c,
        "--alpha",
        "0.7",
        "--lambda",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["kkt"]["stationarity"].as_f64().unwrap() <= 1e-6);

    let zero = fixture(&dir, "zero.csv", "index,value\n");
    let out = klpdhg(&[
        "check",
        "--input",
        &f,
        "--coefficients",
        &zero,
        "--alpha",
        "0.7",
        "--lambda",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_is_deterministic() {
    let args = [
        "bench",
        "--m",
        "60",
        "--n",
        "15",
        "--correlation",
        "0.3",
        "--seed",
        "11",
        "--solver",
        "en",
    ];
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_secs");
        v
    };
    let a = strip(klpdhg(&args));
    assert_eq!(a, strip(klpdhg(&args)));
    assert!(a["iterations"].as_u64().unwrap() > 0);
}

#[test]
fn generated_data_round_trips_bit_identically() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&BenchSpec {
        m: 80,
        n: 20,
        correlation: 0.5,
        seed: 7,
    })
    .unwrap();
    let csv_path = dir.path().join("d.csv");
    let svm_path = dir.path().join("d.svm");
    write_csv(&inst.data, std::fs::File::create(&csv_path).unwrap()).unwrap();
    write_svmlight(&inst.data, std::fs::File::create(&svm_path).unwrap()).unwrap();

    let p = PenaltyParams::new(0.02, 0.5).unwrap();
    let cfg = SolveConfig::default();
    let base = solve(&inst.data, &p, &cfg).unwrap();
    for (path, f) in [(&csv_path, Format::Csv), (&svm_path, Format::Svmlight)] {
        let back = load_dataset(path, f).unwrap();
        assert_eq!(back.y(), inst.data.y());
        let r = solve(&back, &p, &cfg).unwrap();
        assert_eq!(r.residual_history, base.residual_history);
        assert_eq!(r.theta_final, base.theta_final);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("d.csv");
    let d = data.to_str().unwrap();
    klpdhg(&[
        "bench",
        "--m",
        "300",
        "--n",
        "120",
        "--seed",
        "2",
        "--write-data",
        d,
    ]);
    let run = |t: &str| {
        klpdhg(&[
            "solve",
            "--input",
            d,
            "--alpha",
            "0.5",
            "--lambda",
            "0.01",
            "--trace",
            "--threads",
            t,
        ])
        .stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert!(Path::new(d).exists());
}

#[test]
fn spectral_step_rule_is_selectable() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("d.csv");
    let d = data.to_str().unwrap();
    let out = klpdhg(&[
        "bench",
        "--m",
        "200",
        "--n",
        "50",
        "--correlation",
        "0.5",
        "--seed",
        "1",
        "--step-norm",
        "spectral",
        "--write-data",
        d,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = klpdhg(&[
        "solve",
        "--input",
        d,
        "--alpha",
        "0.9",
        "--lambda",
        "0.02",
        "--step-norm",
        "spectral",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        serde_json::from_slice::<SolveOutput>(&out.stdout)
            .unwrap()
            .converged
    );
}
