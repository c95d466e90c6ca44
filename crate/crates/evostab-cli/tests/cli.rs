//! Black-box contract tests for the `evostab` binary: exit codes, report
//! records, config/flag precedence, the certificate round trip, and the two
//! output formats.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Output;

const GEOMETRIC: &str = r#"{"kind":"geometric","dimension":1,"data":0.36787944117144233}"#;
const IDENTITY: &str = r#"{"kind":"identity","dimension":2}"#;
const ALTERNATING: &str = r#"{"kind":"example1","dimension":1}"#;
const OSCILLATORY: &str = r#"{"kind":"example2","dimension":1}"#;
const SWAP_STEPS: &str = concat!(
    r#"{"kind":"matrix-list","dimension":2,"data":["#,
    r#"[0.0,1.0,1.0,0.0],[0.0,1.0,1.0,0.0],[0.0,1.0,1.0,0.0],[0.0,1.0,1.0,0.0]]}"#
);
const WINDOW: &str =
    r#"{"dimension":2,"values":[[0.0,0.0],[1.0,0.5],[0.0,-2.0],[0.25,0.0],[0.0,0.0]]}"#;
const WINDOW_BAD_START: &str =
    r#"{"dimension":2,"values":[[0.5,0.0],[1.0,0.5],[0.0,-2.0],[0.25,0.0],[0.0,0.0]]}"#;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("evostab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn put(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_evostab"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|line| serde_json::from_str(line).expect("stdout line parses as JSON"))
        .collect()
}

fn of_kind<'a>(recs: &'a [Value], kind: &str) -> Vec<&'a Value> {
    recs.iter().filter(|r| r["record"] == kind).collect()
}

#[test]
fn help_and_version_exit_zero() {
    for args in [vec!["--help"], vec!["--version"], vec!["certify", "--help"]] {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?} must exit 0");
        assert!(!out.stdout.is_empty(), "{args:?} must print usage text");
    }
}

#[test]
fn usage_and_config_errors_exit_three() {
    let dir = scratch("usage-errors");
    let geo = put(&dir, "geo.json", GEOMETRIC);
    let geo = geo.to_str().unwrap();
    let broken = put(&dir, "broken.json", "{ not json");
    let stray = put(&dir, "stray.json", r#"{"horizon": 64, "unknown_knob": 1}"#);

    let cases: Vec<Vec<&str>> = vec![
        vec!["no-such-command"],
        vec!["example", "ex9"],
        vec!["certify", "--family", geo],
        vec!["analyze", "--alpha-grid=0"],
        vec!["analyze", "--family", broken.to_str().unwrap(), "--alpha-grid=0"],
        vec!["analyze", "--config", stray.to_str().unwrap(), "--alpha-grid=0"],
        vec!["analyze", "--family", geo, "--alpha-grid=abc"],
        vec!["analyze", "--family", geo, "--alpha-grid=0", "--norm", "taxicab"],
        vec!["certify", "--family", geo, "--alpha", "0", "--delta", "1.5"],
        vec!["analyze", "--family", geo, "--alpha-grid=0", "--horizon", "0"],
        vec!["solve", "--family", geo, "--input", "/nonexistent/window.json"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 3, "{args:?} must exit 3, stderr: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty(), "{args:?} must explain itself on stderr");
    }
}

#[test]
fn analyze_labels_the_alternating_rate_family() {
    let dir = scratch("analyze-alternating");
    let fam = put(&dir, "fam.json", ALTERNATING);
    let out = run(&[
        "analyze",
        "--family",
        fam.to_str().unwrap(),
        "--alpha-grid=-0.5,-0.3333333333333333,0",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let labels: Vec<&str> = of_kind(&recs, "alpha")
        .iter()
        .map(|r| r["classification"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["growing", "nonuniform", "nonuniform"]);
}

#[test]
fn analyze_labels_identity_and_oscillatory_families() {
    let dir = scratch("analyze-labels");

    let fam = put(&dir, "id.json", IDENTITY);
    let out = run(&["analyze", "--family", fam.to_str().unwrap(), "--alpha-grid=0"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    let rows = of_kind(&recs, "alpha");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["classification"], "uniform");
    assert_eq!(rows[0]["growth_constant_sup_ln"].as_f64().unwrap(), 0.0);

    let fam = put(&dir, "osc.json", OSCILLATORY);
    let out = run(&["analyze", "--family", fam.to_str().unwrap(), "--alpha-grid=-0.5,0"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    let labels: Vec<&str> = of_kind(&recs, "alpha")
        .iter()
        .map(|r| r["classification"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["nonuniform", "uniform"]);
}

#[test]
fn certificate_round_trips_through_verify() {
    let dir = scratch("cert-roundtrip");
    let fam = put(&dir, "geo.json", GEOMETRIC);
    let cert_path = dir.join("cert.json");

    let out = run(&[
        "certify",
        "--family",
        fam.to_str().unwrap(),
        "--alpha",
        "0",
        "--certificate-out",
        cert_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(of_kind(&recs, "inverse-bounds").len(), 1);
    let cert_rec = of_kind(&recs, "certificate");
    assert_eq!(cert_rec.len(), 1);

    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    let nu = cert["decay_rate"].as_f64().unwrap();
    assert!((nu - 0.31606027941427883).abs() <= 1e-6, "decay rate {nu}");

    let out = run(&["verify", "--certificate", cert_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let ver = of_kind(&recs, "verification");
    assert_eq!(ver.len(), 1);
    assert_eq!(ver[0]["passes"], Value::Bool(true));
    let ratio = ver[0]["max_ratio"].as_f64().unwrap();
    assert!((ratio - 0.5).abs() <= 1e-12, "verified ratio {ratio}");
    let summary = of_kind(&recs, "summary");
    assert_eq!(summary[0]["exit"].as_u64(), Some(0));
}

#[test]
fn certify_negative_exponent_succeeds_on_the_contraction() {
    let dir = scratch("cert-negative");
    let fam = put(&dir, "geo.json", GEOMETRIC);
    let out = run(&["certify", "--family", fam.to_str().unwrap(), "--alpha=-0.25"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(of_kind(&recs, "certificate").len(), 1);
    let ver = of_kind(&recs, "verification");
    assert_eq!(ver[0]["passes"], Value::Bool(true));
    // the step chain belongs to the nonnegative-exponent construction
    assert!(of_kind(&recs, "step-chain").is_empty());
}

#[test]
fn identity_family_is_not_certifiable() {
    let dir = scratch("cert-identity");
    let fam = put(&dir, "id.json", IDENTITY);
    let out = run(&["certify", "--family", fam.to_str().unwrap(), "--alpha", "0"]);
    assert_eq!(code(&out), 1);
    let recs = records(&out);
    let err = of_kind(&recs, "error");
    assert_eq!(err.len(), 1);
    assert_eq!(err[0]["exit"].as_u64(), Some(1));
}

#[test]
fn short_example_window_reports_inconclusive() {
    let out = run(&["example", "ex2", "--horizon", "16"]);
    assert_eq!(code(&out), 2);
    let recs = records(&out);
    let err = of_kind(&recs, "error");
    assert_eq!(err.len(), 1);
    assert_eq!(err[0]["exit"].as_u64(), Some(2));
}

#[test]
fn example_suites_pass_end_to_end() {
    for args in [
        vec!["example", "ex1"],
        vec!["example", "ex2", "--alpha=-0.5", "--beta=-0.2", "--n-max", "40"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?} stderr: {}", String::from_utf8_lossy(&out.stderr));
        let recs = records(&out);
        let summary = of_kind(&recs, "summary");
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0]["fail"].as_u64(), Some(0), "{args:?}");
        assert_eq!(summary[0]["inconclusive"].as_u64(), Some(0), "{args:?}");
        assert!(!of_kind(&recs, "check").is_empty(), "{args:?} must list its checks");
    }
}

#[test]
fn undecided_witness_window_is_inconclusive_not_failed() {
    // at this scale the witness tail has not yet dropped under the membership
    // threshold: the verdict must surface as inconclusive (exit 2), not as a
    // hard failure
    let out = run(&["example", "ex2", "--alpha=-0.5", "--beta=-0.2", "--n-max", "10"]);
    assert_eq!(code(&out), 2, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let summary = of_kind(&recs, "summary");
    assert_eq!(summary[0]["fail"].as_u64(), Some(0));
    assert!(summary[0]["inconclusive"].as_u64().unwrap() >= 1);
    assert_eq!(summary[0]["exit"].as_u64(), Some(2));
}

#[test]
fn solve_reports_a_tiny_residual_and_rejects_a_nonzero_start() {
    let dir = scratch("solve");
    let fam = put(&dir, "swap.json", SWAP_STEPS);
    let win = put(&dir, "win.json", WINDOW);
    let sol_path = dir.join("solution.json");

    let out = run(&[
        "solve",
        "--family",
        fam.to_str().unwrap(),
        "--input",
        win.to_str().unwrap(),
        "--solution-out",
        sol_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let sol = of_kind(&recs, "solution");
    assert_eq!(sol.len(), 1);
    assert!(sol[0]["residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(sol[0]["dimension"].as_u64(), Some(2));
    let window_out = of_kind(&recs, "window");
    assert_eq!(window_out.len(), 1);
    assert_eq!(window_out[0]["values"].as_array().unwrap().len(), 5);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&sol_path).unwrap()).unwrap();
    assert_eq!(saved["dimension"].as_u64(), Some(2));

    let bad = put(&dir, "bad.json", WINDOW_BAD_START);
    let out = run(&[
        "solve",
        "--family",
        fam.to_str().unwrap(),
        "--input",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3, "a window with a nonzero first slot is a config error");
    assert!(!out.stderr.is_empty());
}

#[test]
fn config_file_settings_yield_to_flags() {
    let dir = scratch("config-precedence");
    let geo_inline: Value = serde_json::from_str(GEOMETRIC).unwrap();
    let cfg = put(
        &dir,
        "cfg.json",
        &serde_json::json!({
            "family": geo_inline,
            "horizon": 64,
            "alpha_grid": [0.0]
        })
        .to_string(),
    );
    let cfg = cfg.to_str().unwrap();

    let out = run(&["analyze", "--config", cfg]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(of_kind(&recs, "run")[0]["horizon"].as_u64(), Some(64));

    let out = run(&["analyze", "--config", cfg, "--horizon", "32"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert_eq!(of_kind(&recs, "run")[0]["horizon"].as_u64(), Some(32));
}

#[test]
fn table_format_renders_aligned_rows() {
    let dir = scratch("table");
    let fam = put(&dir, "geo.json", GEOMETRIC);
    let out = run(&[
        "analyze",
        "--family",
        fam.to_str().unwrap(),
        "--alpha-grid=0",
        "--format",
        "table",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("record"), "header row first: {first}");
    assert!(first.contains("field") && first.contains("value"));
    assert!(text.lines().any(|l| l.contains("classification")));
}

#[test]
fn output_flag_writes_the_report_file_and_keeps_stdout_quiet() {
    let dir = scratch("output-file");
    let fam = put(&dir, "geo.json", GEOMETRIC);
    let fam = fam.to_str().unwrap();
    let report = dir.join("report.jsonl");

    let to_file = run(&[
        "analyze",
        "--family",
        fam,
        "--alpha-grid=0",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty(), "report must go to the file only");
    let bytes = std::fs::read(&report).unwrap();
    assert!(!bytes.is_empty());
    assert_eq!(bytes.last(), Some(&b'\n'));

    let to_stdout = run(&["analyze", "--family", fam, "--alpha-grid=0"]);
    assert_eq!(code(&to_stdout), 0);
    assert_eq!(to_stdout.stdout, bytes, "stdout and file reports must match byte for byte");
}
