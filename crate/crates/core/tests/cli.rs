use std::process::Command;

use clap::Parser;
use utstar::cli::{exit_code, run, Cli};

fn run_args(args: &[&str]) -> (String, u8) {
    let cli = Cli::try_parse_from(std::iter::once("utstar").chain(args.iter().copied())).unwrap();
    let result = run(&cli);
    let code = exit_code(&result);
    (
        result.map(|o| o.body).unwrap_or_else(|e| e.to_string()),
        code,
    )
}

#[test]
fn codim_csv_has_the_documented_columns() {
    let (body, code) = run_args(&["codim", "--n", "2", "--m", "1..=2", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,m,l,omega,bound,c_m,asymptotic_num,asymptotic_den,ratio_num,ratio_den,method,ratio_decimal"
    );
    assert_eq!(
        lines.next().unwrap(),
        "2,1,0,2,4,3,1,1,3,1,enumerate+oracle,3.000000"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = run_args(&[
        "codim", "--n", "3", "--m", "2..5", "--format", "json", "--jobs", "1",
    ]);
    let b = run_args(&["codim", "--n", "3", "--m", "2..5", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn basis_header_then_monomials() {
    let (body, _) = run_args(&["basis", "--n", "3", "--l", "2", "--m", "2"]);
    let mut lines = body.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["count"], 2);
    assert_eq!(header["kind"], "orth");
    assert_eq!(lines.count(), 2);
}

#[test]
fn oracle_method_respects_the_budget() {
    let (msg, code) = run_args(&[
        "omega", "--n", "3", "--l", "1", "--m", "9", "--method", "oracle", "--budget", "1000",
    ]);
    assert_eq!(code, 2);
    assert!(msg.contains("budget"), "{msg}");
}

#[test]
fn symplectic_needs_even_size() {
    let (msg, code) = run_args(&["identities", "--n", "3", "--involution", "symp"]);
    assert_eq!(code, 2);
    assert!(msg.contains("even"));
}

#[test]
fn scoped_verify_passes() {
    let (body, code) = run_args(&["verify", "--n", "4", "--involution", "symp", "--max-m", "3"]);
    assert_eq!(code, 0, "{body}");
    assert!(body.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn binary_writes_to_out_file_and_reads_env() {
    let dir = std::env::temp_dir().join(format!("utstar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("omega.json");
    let status = Command::new(env!("CARGO_BIN_EXE_utstar"))
        .args(["omega", "--l", "2", "--m", "3", "--format", "json", "--out"])
        .arg(&out)
        .env("UTSTAR_N", "3")
        .status()
        .unwrap();
    assert!(status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["omega"], "6");
    std::fs::remove_dir_all(dir).ok();
}
