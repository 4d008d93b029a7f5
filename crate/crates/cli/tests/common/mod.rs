#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::Value;

pub const KINDS: [&str; 5] = ["verify", "lemma", "count", "terms", "table"];

pub fn pentarec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pentarec"))
        .args(args)
        .env_remove("PARTITION_ORACLE_BOUND")
        .output()
        .expect("binary runs")
}

/// Checks the report document shape; returns a description of the first
/// violation.
pub fn check_schema(doc: &Value) -> Result<(), String> {
    let obj = doc.as_object().ok_or("top level is not an object")?;
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    if keys != ["elapsed_ms", "kind", "params", "passed", "residuals"] {
        return Err(format!("unexpected keys {keys:?}"));
    }
    let kind = obj["kind"].as_str().ok_or("kind is not a string")?;
    if !KINDS.contains(&kind) {
        return Err(format!("unknown kind {kind}"));
    }
    if !obj["params"].is_object() {
        return Err("params is not an object".into());
    }
    if !obj["passed"].is_boolean() {
        return Err("passed is not a bool".into());
    }
    if !obj["elapsed_ms"].is_number() {
        return Err("elapsed_ms is not a number".into());
    }
    for entry in obj["residuals"].as_array().ok_or("residuals is not an array")? {
        let e = entry.as_object().ok_or("residual entry is not an object")?;
        if e.len() != 2 || !e["n"].is_u64() {
            return Err(format!("bad residual entry {entry}"));
        }
        let value = e["value"].as_str().ok_or("residual value is not a string")?;
        value
            .parse::<num_bigint::BigInt>()
            .map_err(|_| format!("residual value {value:?} is not an integer"))?;
    }
    Ok(())
}

/// The document with timing removed, for determinism comparisons.
pub fn payload(doc: &Value) -> Value {
    let mut d = doc.clone();
    d.as_object_mut().unwrap().remove("elapsed_ms");
    d
}

pub fn parse_json(stdout: &[u8]) -> Value {
    let text = std::str::from_utf8(stdout).expect("utf-8");
    assert_eq!(text.lines().count(), 1, "one document per invocation");
    serde_json::from_str(text).expect("well-formed json")
}
