//! Run reports, CSV emission, and the reproducibility environment knobs.
//!
//! `QUBOKIT_THREADS` caps the worker threads used for replica execution
//! (default 1; results never depend on it). `QUBOKIT_FIXED_TIME`, when set
//! to a number, replaces every reported wall-clock figure, which makes
//! whole outputs byte-comparable across runs.

use serde::Serialize;

pub const FIXED_TIME_ENV: &str = "QUBOKIT_FIXED_TIME";
pub const THREADS_ENV: &str = "QUBOKIT_THREADS";

/// Measured seconds, unless the fixed-time override is active.
pub fn effective_time(measured: f64) -> f64 {
    match std::env::var(FIXED_TIME_ENV) {
        Ok(v) => v.parse().unwrap_or(measured),
        Err(_) => measured,
    }
}

/// Worker thread cap from the environment, at least 1.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

/// The JSON document `solve` and `oracle` print on stdout.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub instance: String,
    pub solver_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u64>,
    /// Everything internal minimizes; `max` means the input was negated at
    /// the boundary and `objective` is reported in the original sense.
    pub objective_sense: &'static str,
    /// Model energy of the best state found, when any state exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_energy: Option<f64>,
    /// Problem-space objective of the decoded solution (assignment cost,
    /// cycle cost, colors used), absent when nothing feasible was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    pub feasible: bool,
    pub violations: Vec<String>,
    pub solution: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flips_accepted: Option<u64>,
    pub time_sec: f64,
}

pub fn print_report(report: &RunReport) {
    println!(
        "{}",
        serde_json::to_string_pretty(report).expect("reports always serialize")
    );
}

/// Frozen column order for everything `bench`, `sweep`, and `ordering`
/// emit. Optional cells print empty.
pub const CSV_HEADER: &str =
    "instance_id,solver_id,mode,lambda,seed,ub,feasible,time_sec,norm_diff,pct_gap";

#[derive(Clone, Debug)]
pub struct CsvRow {
    pub instance_id: String,
    pub solver_id: String,
    pub mode: String,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub ub: Option<f64>,
    pub feasible: bool,
    pub time_sec: f64,
    pub norm_diff: Option<f64>,
    pub pct_gap: Option<f64>,
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

impl CsvRow {
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.instance_id,
            self.solver_id,
            self.mode,
            opt_f64(self.lambda),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            opt_f64(self.ub),
            self.feasible,
            effective_time(self.time_sec),
            opt_f64(self.norm_diff),
            opt_f64(self.pct_gap),
        )
    }
}

pub fn rows_to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_line());
        out.push('\n');
    }
    out
}
