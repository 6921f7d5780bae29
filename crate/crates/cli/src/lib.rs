//! Verification suites over the `qcuntz` library and their JSON reports.

mod config;
mod suites;

use serde::Serialize;
use thiserror::Error;

pub use config::{parse_q, parse_theta, parse_trunc, SuiteConfig, Trunc};
pub use suites::SUITES;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] qcuntz::Error),
}

/// One measured quantity against its threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// Formula the residual measures.
    pub anchor: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// `pass` iff `residual <= tol`; NaN fails. Negative zero is reported as zero.
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, residual: f64, tol: f64) -> Check {
        let residual = residual + 0.0;
        Check { id: id.into(), anchor: anchor.into(), residual, tol, pass: residual <= tol }
    }

    /// Exact check: zero failures required.
    pub fn exact(id: impl Into<String>, anchor: impl Into<String>, failures: usize) -> Check {
        Check::new(id, anchor, failures as f64, 0.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: SuiteConfig,
    /// Sorted by id.
    pub checks: Vec<Check>,
    /// Suite-specific tables, currently the K-theory table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<serde_json::Value>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs `name` (one of [`SUITES`] or `all`) and returns the sorted report.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<Report, CliError> {
    config.validate()?;
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(CliError::UnknownSuite(name.into()));
    };
    let mut checks = Vec::new();
    let mut table = None;
    for n in names {
        let out = suites::run(n, config)?;
        checks.extend(out.checks);
        if out.table.is_some() {
            table = out.table;
        }
    }
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(Report { suite: name.into(), config: config.clone(), checks, table })
}
