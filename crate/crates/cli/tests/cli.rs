//! End-to-end checks of the binary: output schemas and the determinism
//! contract (same config and seed give byte-identical records).

use std::process::Command;

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_monogrid"))
        .args(args)
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

#[test]
fn distance_reports_the_known_fraction() {
    let (stdout, code) = run(&["distance", "--fixture", "anti_majority", "--n", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(v["eps"], "2/5");
    assert_eq!(v["matching_size"], 10);
    assert_eq!(v["domain_size"], 25);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn reduce_is_byte_identical_across_reruns() {
    let args = [
        "reduce",
        "--fixture",
        "anti_majority",
        "--n",
        "20",
        "--k",
        "4",
        "--trials",
        "30",
        "--seed",
        "9",
    ];
    let (first, code) = run(&args);
    assert_eq!(code, 0);
    let (second, _) = run(&args);
    assert_eq!(first, second);
    assert!(first.starts_with("# schema_version=1\nk,trial,eps_restricted\n"));
    assert_eq!(first.lines().count(), 2 + 30 + 1); // header, rows, summary
}

#[test]
fn stacks_rows_carry_the_bound_fields() {
    let (stdout, code) = run(&[
        "stacks",
        "--fixture",
        "anti_majority",
        "--n",
        "5",
        "--matching",
        "r",
        "--raw",
    ]);
    assert_eq!(code, 0);
    let first: serde_json::Value =
        serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
    for key in ["lambda", "mass_at_least_lambda", "bound", "ok"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn variance_all_functions_sweep_is_clean() {
    let (stdout, code) = run(&[
        "variance",
        "--fixture",
        "all_functions",
        "--n",
        "2",
        "--d",
        "2",
        "--mode",
        "exact",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(v["functions"], 16);
    assert_eq!(v["violations"], 0);
}

#[test]
fn invalid_fixture_exits_nonzero() {
    let (_, code) = run(&["distance", "--fixture", "mystery"]);
    assert_ne!(code, 0);
}

#[test]
fn accept_filter_selects_matching_criteria() {
    let (stdout, code) = run(&["accept", "--filter", "hall"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("hall_deficit_formula"));
    assert!(stdout.contains("all 1 criteria passed"));
}
