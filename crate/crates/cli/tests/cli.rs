use std::process::{Command, Output};

use simplex_negation::claims::{check_claims, reports_to_jsonl, ClaimId};
use simplex_negation::report::{self, Format};
use simplex_negation::{measure_all, negate_k, trace_negation, CheckConfig, Distribution, MeasureSet};

fn negation(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negation"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = negation(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn dist(s: &str) -> Distribution {
    s.parse().unwrap()
}

#[test]
fn measure_matches_library() {
    let text = stdout_ok(&["measure", "-p", "0.4,0.3,0.2,0.1"]);
    let m: MeasureSet = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(m, measure_all(&dist("0.4,0.3,0.2,0.1")));
    assert!((m.h - 1.2799).abs() < 1e-4);

    let text = stdout_ok(&["measure", "-p", "0.5,0.5"]);
    let m: MeasureSet = serde_json::from_str(text.trim()).unwrap();
    assert!((m.h - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn measure_rejects_bad_sum() {
    let out = negation(&["measure", "-p", "0.5,0.6"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sum = 1.1"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn measure_names_bad_entry() {
    let out = negation(&["measure", "-p", "0.5,x"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("entry 2"));
    let out = negation(&["measure", "-p", "-0.5,1.5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("entry 1"));
}

#[test]
fn measure_renormalize_and_csv() {
    let text = stdout_ok(&["measure", "-p", "2,3", "--renormalize", "--format", "csv"]);
    let expected = report::render_measures(&measure_all(&dist("0.4,0.6")), Format::Csv);
    assert_eq!(text, expected);
    assert!(text.starts_with("H,H1,J,VH,VJ\n"));
}

#[test]
fn measure_in_bits() {
    let text = stdout_ok(&["measure", "-p", "0.25,0.25,0.25,0.25", "--log-base", "2"]);
    let m: MeasureSet = serde_json::from_str(text.trim()).unwrap();
    assert!((m.h - 2.0).abs() < 1e-12);
}

#[test]
fn negate_matches_library() {
    let text = stdout_ok(&["negate", "-p", "0.4,0.3,0.2,0.1", "-k", "3"]);
    let d: Distribution = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(d, negate_k(&dist("0.4,0.3,0.2,0.1"), 3));
}

#[test]
fn iterate_examples() {
    let text = stdout_ok(&["iterate", "-p", "0.4,0.3,0.2,0.1", "-k", "3", "--format", "csv"]);
    let trace = trace_negation(&dist("0.4,0.3,0.2,0.1"), 3, 1e-9).unwrap();
    assert_eq!(text, report::trace_to_csv(&trace));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(last[0], 3.0);
    assert!((last[1] - 1.3862).abs() < 1e-3);

    let text = stdout_ok(&["iterate", "-p", "0.2,0.35,0.45", "-k", "1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let step1: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert!((step1["H"].as_f64().unwrap() - 1.0868).abs() < 1e-3);
    let summary: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
    assert!(summary["converged_at"].is_null());
}

#[test]
fn iterate_fixed_point() {
    let text = stdout_ok(&["iterate", "-p", "0.5,0.5", "-k", "10", "--format", "csv"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(!rows.is_empty());
    let measures: Vec<String> = rows.iter().map(|r| r.split(',').skip(1).collect::<Vec<_>>().join(",")).collect();
    assert!(measures.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn sweeps_match_library() {
    let text = stdout_ok(&["sweep-n2", "--format", "csv"]);
    assert_eq!(text, report::sweep_n2(200).unwrap().to_csv());
    assert_eq!(text.lines().count(), 202);

    let text = stdout_ok(&["sweep-n", "--n-min", "2", "--n-max", "30"]);
    assert_eq!(text.trim(), report::sweep_n(2, 30).unwrap().to_json());

    assert!(!negation(&["sweep-n", "--n-min", "5", "--n-max", "4"]).status.success());
    assert!(!negation(&["sweep-n2", "-k", "1"]).status.success());
}

#[test]
fn check_default_run() {
    let text = stdout_ok(&["check", "--trials", "3000"]);
    let reports: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 9);
    let verdict = |i: usize| reports[i]["verdict"].as_str().unwrap().to_string();
    assert_eq!(verdict(0), "CONFIRMED");
    assert_eq!(verdict(1), "REFUTED");
    assert_eq!(verdict(2), "REFUTED");

    let config = CheckConfig {
        trials: 3000,
        ..CheckConfig::default()
    };
    let lib = check_claims(&ClaimId::ALL, &config).unwrap();
    assert_eq!(text, reports_to_jsonl(&lib));
}

#[test]
fn check_is_byte_identical_across_runs_and_workers() {
    let args = ["check", "--seed", "7", "--trials", "2000", "--n-min", "3", "--n-max", "6"];
    let a = stdout_ok(&args);
    let b = stdout_ok(&args);
    let mut one = args.to_vec();
    one.extend(["--workers", "1"]);
    let c = stdout_ok(&one);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn check_single_claim() {
    let text = stdout_ok(&["check", "--claims", "C5"]);
    assert_eq!(text.lines().count(), 1);
    let r: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(r["claim"], "C5");
    assert_eq!(r["verdict"], "CONFIRMED");
}

#[test]
fn check_errors_exit_nonzero() {
    assert!(!negation(&["check", "--claims", "C12"]).status.success());
    assert!(!negation(&["check", "--n-min", "1"]).status.success());
    assert!(!negation(&["check", "--trials", "0"]).status.success());
}
