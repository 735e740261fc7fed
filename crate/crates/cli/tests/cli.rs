use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn tracelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracelab"))
        .args(args)
        .env_remove("TRACELAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_json(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

fn counterexample_files(dir: &Path) {
    write_json(&dir.join("a.json"), &json!({"dim": 2, "re": [[1.0, 0.0], [0.0, 0.0]]}));
    write_json(&dir.join("b.json"), &json!({"dim": 2, "re": [[0.5, 0.5], [0.5, 0.5]]}));
}

#[test]
fn verify_small_grid_passes_and_streams_jsonl() {
    let out = tracelab(&["verify", "--case", "COR_ABQ,MCCARTHY", "--trials", "20", "--dim", "2,3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let records: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // 7 COR_ABQ grid points and 4 MCCARTHY ones, 2 dims, 20 trials each.
    assert_eq!(records.len(), (7 + 4) * 2 * 20);
    for r in &records {
        assert_eq!(r["verdict"], "PASS");
        assert!(r["gap"].as_f64().unwrap() >= -r["tol"].as_f64().unwrap());
    }
}

#[test]
fn verify_on_counterexample_files_fails() {
    let dir = tempfile::tempdir().unwrap();
    counterexample_files(dir.path());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["verify", "--case", "COR_ABQ", "--q", "2.5,4", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()];
    let out = tracelab(&args);
    assert_eq!(code(&out), 1);
    let verdicts: Vec<String> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["verdict"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(verdicts, ["PASS", "FAIL"]);
}

#[test]
fn config_file_forces_failing_case() {
    let dir = tempfile::tempdir().unwrap();
    counterexample_files(dir.path());
    let cfg = dir.path().join("run.json");
    write_json(&cfg, &json!({"case": "COR_ABQ", "q": [4.0], "a": "a.json", "b": "b.json"}));
    let out = tracelab(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let r: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(r["verdict"], "FAIL");
    assert!((r["lhs"].as_f64().unwrap() - 6.5).abs() < 1e-12);
    assert!((r["rhs"].as_f64().unwrap() - 7.0).abs() < 1e-12);
}

#[test]
fn config_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    write_json(&cfg, &json!({"trials": 10, "colour": "blue"}));
    let out = tracelab(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    write_json(&cfg, &json!({"trials": -3}));
    let out = tracelab(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&tracelab(&["nonsense"])), 2);
    assert_eq!(code(&tracelab(&["sweep", "--case", "NOT_A_CASE"])), 2);
    assert_eq!(code(&tracelab(&["sweep", "--format", "xml"])), 2);
    assert_eq!(code(&tracelab(&["search", "--case", "COR_ABQ,ALT"])), 2);
    assert_eq!(code(&tracelab(&["probe", "--region", "FALTQ_HIGH", "--q", "2"])), 2);
    assert_eq!(code(&tracelab(&["sweep", "--case", "MCCARTHY", "--q", "-1"])), 2);
}

#[test]
fn sweep_csv_has_exact_header() {
    let out = tracelab(&["sweep", "--case", "COR_PMEAN", "--trials", "10", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case,q,dim,ensemble,trials,violations,min_gap,worst_seed"));
    // 3 grid points, 3 default dims.
    assert_eq!(lines.count(), 9);
}

#[test]
fn sweep_json_and_plot_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("summary.json");
    let plot = dir.path().join("plot.csv");
    let out = tracelab(&[
        "sweep", "--case", "NORM_COMPRESSION", "--q", "1.5", "--dim", "2", "--trials", "25",
        "--out", out_path.to_str().unwrap(), "--plot", plot.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(summary["case"], "NORM_COMPRESSION");
    assert_eq!(summary["total_trials"], 25);
    assert_eq!(summary["total_violations"], 0);
    let plot_text = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(plot_text.lines().next(), Some("q,min_gap,max_gap"));
    assert_eq!(plot_text.lines().count(), 2);
}

#[test]
fn env_seed_applies_unless_flag_given() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tracelab"));
        cmd.args(["sweep", "--case", "ALT", "--q", "1", "--dim", "2", "--trials", "5"]).args(extra);
        match env {
            Some(s) => cmd.env("TRACELAB_SEED", s),
            None => cmd.env_remove("TRACELAB_SEED"),
        };
        let out = cmd.output().unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["base_seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 42);
    assert_eq!(run(Some("9"), &[]), 9);
    assert_eq!(run(Some("9"), &["--seed", "11"]), 11);
}

#[test]
fn search_finds_counterexample_at_q4() {
    let out = tracelab(&["search", "--case", "COR_ABQ", "--q", "4", "--dim", "2", "--budget", "400"]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["record"]["verdict"], "FAIL");
    assert!(report["inputs"]["a"]["re"].is_array());
}

#[test]
fn search_in_proven_region_exits_0() {
    let out = tracelab(&["search", "--case", "MCCARTHY", "--q", "0.5", "--dim", "2", "--budget", "100"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn probe_always_exits_0() {
    for region in ["FALTQ_HIGH", "FALTQ_NEG", "NORMCOMP_HIGH"] {
        let out = tracelab(&["probe", "--region", region, "--trials", "30", "--dim", "2"]);
        assert_eq!(code(&out), 0, "{region}");
        let s: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(s["total_violations"], 0);
        for cell in s["cells"].as_array().unwrap() {
            assert_eq!(cell["conjecture_obs"], cell["evaluated"]);
        }
    }
    // The region can also be passed as the case.
    assert_eq!(code(&tracelab(&["probe", "--case", "FALTQ_NEG", "--trials", "5", "--dim", "2"])), 0);
}

#[test]
fn repro_table() {
    let out = tracelab(&["repro", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let verdicts: Vec<&str> = rows.iter().map(|r| r[7]).collect();
    assert_eq!(verdicts, ["PASS", "PASS", "FAIL", "FAIL"]);
    assert!(rows.iter().all(|r| r[8] == "true"));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.matches(" ok").count(), 3);
}
