use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tencusps::code_search::builtin_text;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tencusps"))
        .args(args)
        .env_remove("TENCUSPS_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tencusps-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn verify_tables_agrees() {
    let out = bin(&["verify-tables"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert!(doc["command"].as_str().unwrap().ends_with("verify-tables"));
    assert!(doc["timestamp"].is_string());
}

#[test]
fn corrupted_override_names_the_row() {
    let mut rows: Vec<String> = builtin_text("C3").unwrap().lines().map(String::from).collect();
    // flip one entry in row 3 (rows are reported 1-based)
    let mut chars: Vec<char> = rows[2].chars().collect();
    let pos = chars.iter().rposition(|c| c.is_ascii_digit()).unwrap();
    chars[pos] = if chars[pos] == '1' { '2' } else { '1' };
    rows[2] = chars.into_iter().collect();
    let path = scratch("c3_bad.txt", &rows.join("\n"));
    let arg = format!("C3={}", path.display());
    let out = bin(&["--text", "verify-tables", "--override", &arg]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("C3"), "{text}");
    assert!(text.contains("failing rows [3]"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["plan", "--degree", "6"]).status.code(), Some(2));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(bin(&["separability", "--code", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(bin(&["degrees", "--s-type", "u3", "--max", "10000000"]).status.code(), Some(2));
}

#[test]
fn plan_reports_certificates() {
    let out = bin(&["plan", "--degree", "6", "--sigma", "1", "--s-type", "u3"]);
    assert_eq!(out.status.code(), Some(0));
    let p = &json(&out)["payload"];
    assert_eq!((p["a"].as_u64(), p["b"].as_u64()), (Some(1), Some(1)));
    assert_eq!(p["certified"], true);
}

#[test]
fn degrees_output() {
    let out = bin(&["degrees", "--s-type", "u1", "--max", "48"]);
    assert_eq!(out.status.code(), Some(0));
    let degrees: Vec<u64> = json(&out)["payload"]["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(degrees, [24, 30, 36, 40, 42, 48]);
}

#[test]
fn separability_infeasible_code() {
    let out = bin(&["separability", "--code", "C5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["payload"]["feasible"], false);
}

#[test]
fn line_configuration_agrees() {
    let out = bin(&["line-config"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["payload"]["discriminant"], -9);
}

#[test]
fn search_payload_replays() {
    let args = ["--seed", "5", "--budget", "256", "search-codes", "--dim", "3"];
    let (a, b) = (json(&bin(&args)), json(&bin(&args)));
    assert_eq!(a["seed"], 5);
    assert_eq!(a["payload"], b["payload"]);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tencusps"))
        .args(["--budget", "64", "search-codes", "--dim", "2"])
        .env("TENCUSPS_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 99);
}

#[test]
fn codes_export_round_trips() {
    let out = bin(&["--text", "codes", "export", "C7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), builtin_text("C7").unwrap().trim());
}
