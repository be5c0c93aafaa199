use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use principal_cli::{render_json, Report};

fn principal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_principal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).expect("golden file exists")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn verify_lambda0_json_matches_golden() {
    let out = principal(&["verify", "--module", "lambda0", "--max-weight", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("verify_lambda0_w4.json"));
}

#[test]
fn qseries_csv_matches_golden() {
    let out = principal(&["qseries", "--max-weight", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("qseries_w10.csv"));
}

#[test]
fn json_round_trips_byte_identical() {
    let out = principal(&["verify", "--max-weight", "8", "--format", "json"]);
    let text = stdout(&out);
    let parsed: Report = serde_json::from_str(&text).expect("report parses");
    assert_eq!(render_json(&parsed), text);

    let out = principal(&["qseries", "--max-weight", "6", "--format", "json"]);
    let text = stdout(&out);
    let parsed: Report = serde_json::from_str(&text).expect("report parses");
    assert_eq!(render_json(&parsed), text);
}

#[test]
fn json_has_the_documented_top_level_keys() {
    let out = principal(&["verify", "--module", "lambda1", "--max-weight", "3", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["dims", "lemmas", "pieces", "run"]);
    let text = stdout(&out);
    let at = |key: &str| text.find(&format!("\n  \"{key}\":")).unwrap();
    assert!(at("run") < at("pieces") && at("pieces") < at("lemmas") && at("lemmas") < at("dims"));
    assert_eq!(value["lemmas"]["kernel_containment"], true);
    assert_eq!(value["run"]["module_tag"], "lambda1");
}

#[test]
fn verify_csv_has_header_and_one_row_per_piece() {
    let out = principal(&["verify", "--module", "lambda1prime", "--max-weight", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "module_tag,weight,charge,dim_domain,rank_eval,dim_kernel,dim_ideal_piece,containment_ok,equality_ok,witness"
    );
    let expected: usize = (0..=10).map(|n| n / 2 + 1).sum();
    assert_eq!(lines.count(), expected);
}

#[test]
fn exit_codes() {
    assert_eq!(principal(&["verify", "--max-weight", "0"]).status.code(), Some(2));
    assert_eq!(principal(&["lemmas", "--t-max", "3"]).status.code(), Some(2));
    assert_eq!(principal(&["verify", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(principal(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(principal(&["--help"]).status.code(), Some(0));
    assert_eq!(principal(&["lemmas", "--t-max", "4"]).status.code(), Some(0));
    assert_eq!(principal(&["verify", "--module", "lambda1prime", "--max-weight", "10"]).status.code(), Some(0));
}

#[test]
fn lemmas_full_sweep_passes() {
    let out = principal(&["lemmas", "--t-max", "20", "--max-weight", "8", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    for name in [
        "tau_R", "D_R", "lift", "square_zero", "tau_ideal_inclusion", "tau_rho_bijection",
        "ideal_D_stability", "intertwining",
    ] {
        assert_eq!(report.lemmas.get(name), Some(&true), "{name}");
    }
}

#[test]
fn qseries_weight_zero_is_a_single_row() {
    let out = principal(&["qseries", "--max-weight", "0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().skip(1).collect::<Vec<_>>(), ["0,1,1,1,1,true"]);
}

#[test]
fn dims_agree_with_oracle_for_every_module() {
    let out = principal(&["dims", "--max-weight", "9", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.lemmas.len(), 3);
    assert!(report.lemmas.values().all(|&ok| ok));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = principal(&["qseries", "--max-weight", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("all checks pass"));
}
