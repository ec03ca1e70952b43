//! The `qls-bench` binary: subcommands, files and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qls-bench")).args(args).output().unwrap()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const SMALL: &str = r#"{"families": [{"kind": "explicit", "id": "tiny", "a": [[3, 1], [1, 2], [0, 1]], "b": [1, 2, 3], "c": [0.25, -0.5]}],
  "solvers": ["CG", "CGLSI", "QR"], "seed": 1}"#;

#[test]
fn bench_writes_csv_and_table_requires_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    write(&cfg, SMALL);
    let out = dir.path().join("r.csv");
    let o = bench(&["bench", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);

    let o = bench(&["table", "--input", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing configuration"));

    let svg = dir.path().join("p.svg");
    let o = bench(&["profile", "--input", out.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<?xml"));
    assert!(dir.path().join("p.csv").exists());
}

#[test]
fn bench_overrides_and_json_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    write(&cfg, SMALL);
    let o = bench(&[
        "bench", "--config", cfg.to_str().unwrap(), "--format", "json", "--solver", "sm,qreps", "--eps", "1e-10",
        "--tol", "1e-20", "--maxit", "50",
    ]);
    assert!(o.status.success());
    let recs: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let solvers: Vec<&str> = recs.as_array().unwrap().iter().map(|r| r["solver"].as_str().unwrap()).collect();
    assert_eq!(solvers, ["QREPS", "SM"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a power of two"));
}

#[test]
fn config_and_io_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    write(&bad, "{\"families\": [\n  {\"kind\": \"c1\", \"m\": 4}\n]}");
    let o = bench(&["bench", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("config error at 3:1: missing field `n`"));

    let o = bench(&["bench", "--config", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = bench(&["table", "--input", dir.path().join("absent.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_solve_and_trace_share_problem_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    write(&cfg, r#"{"families": [{"kind": "c1", "id": "g", "m": 12, "n": 5, "a": 2, "alpha": 0.5}]}"#);
    let probs = dir.path().join("probs");
    let o = bench(&["gen", "--config", cfg.to_str().unwrap(), "--out", probs.to_str().unwrap()]);
    assert!(o.status.success());
    let file = probs.join("g.txt");
    assert!(file.exists());

    let o = bench(&["solve", "--input", file.to_str().unwrap(), "--solver", "aug"]);
    assert!(o.status.success());
    let x: Vec<f64> = String::from_utf8(o.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(x.len(), 5);
    // generated problems have x = (n−1, …, 0)
    for (k, v) in x.iter().enumerate() {
        assert!((v - (4 - k) as f64).abs() < 1e-10, "{x:?}");
    }

    let o = bench(&["trace", "--input", file.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("iteration,gap"));
    assert!(text.lines().count() > 1);
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["error_table.json", "set_p.json", "cg_failure.json"] {
        qls_bench::ExperimentConfig::load(&root.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
