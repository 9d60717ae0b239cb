//! Helpers for driving the compiled binary in a scratch directory.
#![allow(dead_code)] // each test target uses its own subset

use std::path::{Path, PathBuf};
use std::process::Output;

pub struct Run {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_eva-triage")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Run {
    let out: Output = std::process::Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env_remove("EVA_TRIAGE_SEED")
        .output()
        .expect("binary runs");
    Run {
        status: out.status.code().expect("exit code"),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path
}

/// A 476-day arrival series with varied counts and occasional large
/// spikes, deterministic (xorshift-driven so maxima carry no exact ties).
pub fn synthetic_arrivals_csv() -> String {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut text = String::from("day,count\n");
    for day in 1u32..=476 {
        let base = next() % 10;
        let spike = if next() % 22 == 0 { 20 + next() % 90 } else { 0 };
        text.push_str(&format!("{day},{}\n", base + spike));
    }
    text
}

/// A maxima file drawn from the heavy-tailed law used across the tests.
pub fn synthetic_maxima_csv(n: usize, seed: u64) -> String {
    let params =
        eva_triage_core::distributions::GevParams::new(8.3540, 4.2832, 0.8903).unwrap();
    let mut text = String::from("value\n");
    for v in params.sample(n, seed) {
        text.push_str(&format!("{v:.6}\n"));
    }
    text
}

/// A hand-written fit document carrying known parameters.
pub fn fit_document_json(location: f64, scale: f64, shape: f64) -> String {
    format!(
        r#"{{
  "schema": 1,
  "manifest": {{
    "command": "fit",
    "input_paths": ["maxima.csv"],
    "config_echo": {{}},
    "tool_version": "0.1.0"
  }},
  "MLE": {{
    "params": {{ "location": {location}, "scale": {scale}, "shape": {shape} }},
    "method": "MLE",
    "n": 40,
    "warnings": []
  }}
}}
"#
    )
}

pub fn scenario_toml() -> &'static str {
    r#"
horizon_days = 60
capacity_per_day = 10.0
baseline_rate = 6.0
shock_prob = 0.1
seed = 42
policy = "fcfs"
wilson_threshold = 0.3
accurate_sort_cost = 0.2
triage_sort_cost = 0.05

[shock_law]
location = 8.3540
scale = 4.2832
shape = 0.8903
"#
}

pub fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}
