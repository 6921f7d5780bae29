use std::process::Command;

use qcuntz_cli::{run_suite, CliError, SuiteConfig, SUITES};

fn defaults() -> SuiteConfig {
    SuiteConfig::default()
}

#[test]
fn relations_defaults_pass_tightly() {
    let r = run_suite("relations", &defaults()).unwrap();
    assert!(r.passed());
    assert_eq!(r.exit_code(), 0);
    assert!(r.checks.iter().all(|c| c.residual < 1e-12), "{:?}", r.checks);
}

#[test]
fn ktable_three_five() {
    let cfg = SuiteConfig { n: 3, m: 5, ..defaults() };
    let r = run_suite("ktable", &cfg).unwrap();
    assert!(r.passed());
    let t = r.table.unwrap();
    assert_eq!(t["d"], 2);
    assert_eq!(t["KK1_order"], 8);
    assert_eq!(t["K0_Mq"], "Z/2Z ⊕ Z");
}

#[test]
fn witness_seed_seven_verifies_all() {
    let r = run_suite("witness", &SuiteConfig { seed: 7, ..defaults() }).unwrap();
    assert_eq!(r.checks.len(), 20);
    assert_eq!(r.checks.iter().filter(|c| c.pass).count(), 20);
}

#[test]
fn every_suite_passes_and_is_sorted() {
    let r = run_suite("all", &defaults()).unwrap();
    assert!(r.passed(), "{:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    let ids: Vec<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for name in SUITES {
        assert!(ids.iter().any(|id| id.starts_with(name)), "{name} reported nothing");
    }
    assert!(r.checks.iter().all(|c| !c.anchor.is_empty()));
}

#[test]
fn reports_are_byte_identical() {
    let a = run_suite("all", &defaults()).unwrap().to_json();
    let b = run_suite("all", &defaults()).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn config_errors() {
    assert!(matches!(run_suite("nope", &defaults()), Err(CliError::UnknownSuite(_))));
    let bad = SuiteConfig { n: 0, ..defaults() };
    assert!(matches!(run_suite("relations", &bad), Err(CliError::Config(_))));
    let not_unimodular = SuiteConfig { q: Some([0.5, 0.0]), ..defaults() };
    assert!(matches!(run_suite("relations", &not_unimodular), Err(CliError::Library(_))));
}

#[test]
fn zero_tolerance_fails_rounded_checks() {
    let q = Some([0.5 * (0.4 * std::f64::consts::PI).cos(), 0.5 * (0.4 * std::f64::consts::PI).sin()]);
    let r = run_suite("untwist", &SuiteConfig { tol: 0.0, q, ..defaults() }).unwrap();
    assert!(!r.passed());
    assert_eq!(r.exit_code(), 1);
    assert!(r.checks.iter().all(|c| c.residual.is_sign_positive()));
}

fn qcuntz(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qcuntz")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes_and_json_file() {
    let path = std::env::temp_dir().join(format!("qcuntz-ktable-{}.json", std::process::id()));
    let out = qcuntz(&["suite", "ktable", "--n", "3", "--m", "5", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(report["suite"], "ktable");
    assert_eq!(report["config"]["n"], 3);
    assert_eq!(qcuntz(&["suite", "bogus"]).status.code(), Some(2));
    let out = qcuntz(&["eval", "s1 * ("]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 6"));
    let out = qcuntz(&["eval", "s1' * t1", "--generic"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "(1+0i)*q^1*t1*s1'");
}

#[test]
fn binary_reports_failure_with_nonzero_exit() {
    let out = qcuntz(&["suite", "untwist", "--q", "0.5@0.2", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["pass"] == false));
    let out = qcuntz(&["suite", "relations", "--theta", "1,2=0.25", "--theta", "2,2=0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["id"].as_str().unwrap().starts_with("relations/theta/")));
}
