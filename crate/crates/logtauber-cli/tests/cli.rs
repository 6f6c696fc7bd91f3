//! End-to-end CLI checks: exit codes, report determinism and the flag
//! surface the library contracts promise.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logtauber"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn corpus_list_succeeds() {
    let out = run(&["corpus", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["C1", "S1", "S2", "L1", "L2", "O1", "V1"] {
        assert!(text.contains(name), "corpus list missing {name}");
    }
}

#[test]
fn mean_prints_the_tau_row() {
    let out = run(&["mean", "--fn", "S1", "--t-max", "e^pi", "--points", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("t,log_t,loglog_t,tau_re,tau_im"));
    // tau(e^pi) = 2/pi
    let last = text.lines().last().unwrap();
    assert!(
        last.contains("0.6366197723"),
        "expected tau(e^pi) ~ 0.6366197723675815 in '{last}'"
    );
}

#[test]
fn stat_limit_detects_the_spike_family() {
    let out = run(&["stat-limit", "--fn", "S2", "--horizon", "e^16"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["statistical"]["kind"], "statistical");
    assert_eq!(doc["statistical"]["ell"]["re"], 0.0);
}

#[test]
fn verify_lemma_exit_codes() {
    // L2 with the canonical window passes
    let out = run(&[
        "verify-lemma", "1", "--fn", "L2", "--lambda", "2", "--x0", "e^2", "--samples", "200",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["report"]["b1"].as_f64().unwrap() - 2.8853901).abs() < 1e-6);
    assert_eq!(doc["report"]["passed"], true);

    // S1 has no valid eps = 1 window: the hypothesis gate refuses
    let out = run(&[
        "verify-lemma", "1", "--fn", "S1", "--lambda", "2", "--x0", "e^2", "--samples", "200",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid"));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(&["mean"]); // neither --fn nor --fn-file
    assert_eq!(out.status.code(), Some(1), "operational error");
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2), "clap usage errors exit 2");
    let out = run(&["mean", "--fn", "S1", "--t-max", "not-a-number"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_without_evidence_is_inconclusive() {
    // S1 has no statistical limit, so without --ell the witness cannot start
    let out = run(&["witness-theorem1", "--fn", "S1", "--eps", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_condition_failure_exits_one() {
    let out = run(&["check-condition", "landau", "--fn", "F2", "--c", "1", "--horizon", "e^10"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["report"]["passed"], false);
    let u = doc["report"]["extremum_u"].as_f64().unwrap();
    assert!((u - 10f64.exp()).abs() <= 1e-3 * 10f64.exp(), "minimizer at the horizon");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["stat-limit", "--fn", "V1", "--horizon", "e^16"],
        vec!["verify-lemma", "2", "--fn", "O1", "--lambda", "e", "--x0", "e^2", "--samples", "500", "--seed", "7"],
        vec!["modulus", "--fn", "L2", "--mode", "decrease", "--lambdas", "2,1.5", "--x", "e^4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(
            stdout(&a),
            stdout(&b),
            "non-deterministic output for {args:?}"
        );
    }
}

#[test]
fn fn_file_and_out_dir_round_trip() {
    let dir = std::env::temp_dir().join(format!("logtauber-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec_path: PathBuf = dir.join("ramp.dsl");
    std::fs::write(&spec_path, "piece [1, e): 0; piece [e, inf): 1/log(x)").unwrap();

    let out = bin()
        .args(["mean", "--fn-file"])
        .arg(&spec_path)
        .args(["--t-max", "e^8", "--points", "9", "--out"])
        .arg(&dir)
        .args(["--plot-data"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("mean.csv").exists());
    assert!(dir.join("mean.dat").exists());

    let plot = std::fs::read_to_string(dir.join("mean.dat")).unwrap();
    assert_eq!(plot.lines().count(), 9, "two-column plot data, one line per grid point");
    assert!(plot.lines().all(|l| l.split_whitespace().count() == 2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_file_merges_under_flags() {
    let dir = std::env::temp_dir().join(format!("logtauber-cfg-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{ "horizon": "e^16", "seed": 9 }"#).unwrap();

    let out = bin()
        .args(["stat-limit", "--fn", "C1", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["provenance"]["config"]["seed"], 9);
    let horizons = doc["statistical"]["evidence"]["horizons"].as_array().unwrap();
    let last = horizons.last().unwrap().as_f64().unwrap();
    assert!((last - 16f64.exp()).abs() < 1e-6, "config horizon honored, got {last}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn suite_smoke_with_theorem_filter() {
    let out = run(&["suite", "--horizon", "e^16", "--theorem", "A"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("summary:"));
    assert!(text.contains("\"counterexample\": 0"));
}
