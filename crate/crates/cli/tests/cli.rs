use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2genus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

#[test]
fn rank_of_i3_plus_j3() {
    let (code, v) = report(&["rank", &fixture("i3_plus_j3.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["rank"], 2);
    assert_eq!(v["tool"], "z2genus");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["command"]["name"], "rank");
}

#[test]
fn kmn_bounds_3_3() {
    let (code, v) = report(&["kmn-bounds", "3", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["g_ringel"], 1);
    assert_eq!(v["report"]["g0_lower"], 1);
}

#[test]
fn kmn_bounds_refuses_small_sides() {
    assert_eq!(run(&["kmn-bounds", "2", "5"]).status.code(), Some(2));
}

#[test]
fn search_upper_on_c4_is_zero() {
    let (code, v) = report(&["search-upper", &fixture("c4.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["certificate"]["value"], 0);
    assert_eq!(v["report"]["verified"], true);
}

#[test]
fn search_upper_alternate_on_k5() {
    let (code, v) = report(&["search-upper", &fixture("k5.txt"), "--alternate", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["certificate"]["value"], 1);
    assert_eq!(v["report"]["certificate"]["bound_kind"], "g0");
}

#[test]
fn factor_of_hyperbolic_plane() {
    let (code, v) = report(&["factor", &fixture("hyperbolic.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["factor"]["factor"]["rows"], 3);
    assert_eq!(v["report"]["factor"]["factor_rank"], 2);
    assert_eq!(v["report"]["product_matches"], true);
}

#[test]
fn minrank_files() {
    let (code, v) = report(&["minrank", &fixture("corner.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["formula"]["value"], 1);
    assert_eq!(v["report"]["oracle"]["value"], 1);
    let (code, v) = report(&["minrank", &fixture("three_upper.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["layout"], "three_upper");
    let (code, v) = report(&["minrank", &fixture("three_upper.txt"), "--oracle-bits", "1"]);
    assert_eq!(code, 0);
    assert!(v["report"]["oracle"].is_null());
    assert!(v["report"]["oracle_skipped"].is_string());
}

#[test]
fn tournament_modes() {
    let (code, v) = report(&["tournament-verify", &fixture("cyclic_tournament.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["rank"], 3);
    assert_eq!(run(&["tournament-verify", &fixture("hyperbolic.txt")]).status.code(), Some(2));
    let (code, v) = report(&["tournament-verify", "--blocks", "2", "3", "--count", "5", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["records"].as_array().unwrap().len(), 5);
    assert_eq!(v["report"]["violations"], 0);
}

#[test]
fn kleitman_batch() {
    let (code, v) = report(&["kleitman", "--count", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["value_one"], 10);
}

#[test]
fn amalgamation_files() {
    let (code, v) = report(&["amalgam-check", &fixture("amalgam_k5.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["inequalities_checked"][0]["status"], "holds");
    let (code, v) = report(&["amalgam-check", &fixture("amalgam_refuted.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["holds"], false);
}

#[test]
fn claim_check_file() {
    let (code, v) = report(&["claim-check", &fixture("claim_block_diagonal.txt"), "--sizes", "2", "0", "0", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["lhs"], 4);
    assert_eq!(v["report"]["rhs"], 4);
    let out = run(&["claim-check", &fixture("claim_block_diagonal.txt"), "--sizes", "1", "0", "2", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_reports_position() {
    let out = run(&["rank", &fixture("malformed.txt")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column 2"), "{err}");
    assert_eq!(run(&["rank"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn table_format_and_output_file() {
    let out = run(&["kmn-sweep", "--max", "5", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("4\t4\t1\t1\t2\t")), "{text}");
    let path = std::env::temp_dir().join(format!("z2genus-cli-test-{}.json", std::process::id()));
    let out = run(&["kmn-bounds", "4", "6", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["g_ringel"], 2);
    std::fs::remove_file(path).unwrap();
}
