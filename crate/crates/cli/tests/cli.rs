//! End-to-end runs of the `jmshuffle` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jmshuffle"))
        .args(args)
        .env_remove("SHUFFLE_CAPACITY_OVERRIDE")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

/// `(t, value, kind)` for every curve row of `mixing` CSV output.
fn curve_rows(csv: &str) -> Vec<(u64, f64, String)> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,value,kind,n,k,c"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].to_string(),
            )
        })
        .collect()
}

#[test]
fn spectrum_n4_k2_multiplicities_sum_to_24() {
    let text = stdout(&["spectrum", "--n", "4", "--k", "2", "--format", "json"]);
    let total: u64 = text
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            v["multiplicity"].as_str().unwrap().parse::<u64>().unwrap()
        })
        .sum();
    assert_eq!(total, 24);
}

#[test]
fn spectrum_n2_k1_csv() {
    let text = stdout(&["spectrum", "--n", "2", "--k", "1"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,mu,value_num,value_den,multiplicity");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(",1,1,1"));
    assert!(lines[2].ends_with(",0,1,1"));
}

#[test]
fn spectrum_general_set_labels_tableaux() {
    let text = stdout(&["spectrum", "--n", "3", "--set", "3", "--format", "json"]);
    let rows: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(rows.iter().all(|r| r.get("tableau").is_some()));
    let total: u64 = rows
        .iter()
        .map(|r| r["multiplicity"].as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 6);
}

#[test]
fn mixing_n6_k2_is_sandwiched() {
    let rows = curve_rows(&stdout(&["mixing", "--n", "6", "--k", "2", "--tmax", "60"]));
    let curve =
        |kind: &str| -> Vec<f64> { rows.iter().filter(|r| r.2 == kind).map(|r| r.1).collect() };
    let (l2, lower, tv) = (curve("l2_upper"), curve("lower_bound"), curve("exact_tv"));
    assert_eq!((l2.len(), lower.len(), tv.len()), (61, 61, 61));
    for t in 0..=60 {
        assert!(lower[t] <= tv[t] + 1e-12, "t = {t}");
        if t > 0 {
            assert!(tv[t] <= l2[t] + 1e-12, "t = {t}");
        }
    }
}

#[test]
fn mixing_n2_reaches_uniform_in_one_step() {
    let rows = curve_rows(&stdout(&["mixing", "--n", "2", "--k", "1", "--tmax", "1"]));
    let tv: Vec<&(u64, f64, String)> = rows.iter().filter(|r| r.2 == "exact_tv").collect();
    assert_eq!(tv.len(), 2);
    assert_eq!((tv[1].0, tv[1].1), (1, 0.0));
}

#[test]
fn mixing_marks_cutoff_for_large_deck() {
    let text = stdout(&[
        "mixing", "--n", "100", "--k", "1", "--c", "0", "--tmax", "10",
    ]);
    let marker = text
        .lines()
        .find(|l| l.contains("cutoff_marker"))
        .expect("marker row");
    assert!(marker.starts_with("461,"), "{marker}");
    assert!(
        marker.ends_with(",0.0") || marker.ends_with(",0"),
        "{marker}"
    );
}

#[test]
fn profile_is_decreasing_in_c() {
    let text = stdout(&["profile", "--n", "20", "--k", "3", "--c", "-1,0,1,2"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c,limit_profile,profile_comparison,n,k"));
    let limit: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(limit.len(), 4);
    assert!(limit.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn profile_comparison_vanishes_for_k_equal_n() {
    let text = stdout(&[
        "profile", "--n", "20", "--k", "20", "--c", "0", "--format", "json",
    ]);
    let rows: Value = serde_json::from_str(&text).unwrap();
    assert!(rows[0]["profile_comparison"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_default_passes() {
    let text = stdout(&["verify"]);
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
}

#[test]
fn sample_reports_closed_form_mean() {
    let text = stdout(&[
        "sample", "--n", "6", "--k", "2", "--t", "10", "--trials", "4000", "--seed", "3",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let field = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    let mean: f64 = field("mean").parse().unwrap();
    let exact: f64 = field("closed_form_mean").parse().unwrap();
    let se: f64 = field("standard_error").parse().unwrap();
    assert!((mean - exact).abs() <= 5.0 * se);
    let hist: u64 = field("histogram")
        .split(';')
        .map(|h| h.parse::<u64>().unwrap())
        .sum();
    assert_eq!(hist, 4000);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &[
            "sample", "--n", "9", "--k", "4", "--trials", "500", "--seed", "11",
        ][..],
        &["mixing", "--n", "5", "--set", "3,5", "--tmax", "20"][..],
        &["profile", "--n", "12", "--k", "5", "--c", "0,1"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let path_str = path.to_str().unwrap();
    let printed = run(&["spectrum", "--n", "4", "--k", "2", "--out", path_str]);
    assert!(printed.status.success());
    assert!(printed.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&["spectrum", "--n", "4", "--k", "2"])
    );
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"n": 4, "k": 2, "format": "json"}"#).unwrap();
    let config = config.to_str().unwrap();
    assert_eq!(
        stdout(&["spectrum", "--config", config]),
        stdout(&["spectrum", "--n", "4", "--k", "2", "--format", "json"])
    );
    assert_eq!(
        stdout(&["spectrum", "--config", config, "--k", "1", "--format", "csv"]),
        stdout(&["spectrum", "--n", "4", "--k", "1"])
    );
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(exit_code(&["spectrum", "--n", "4"]), 2);
    assert_eq!(
        exit_code(&["spectrum", "--n", "4", "--k", "2", "--set", "4"]),
        2
    );
    assert_eq!(exit_code(&["spectrum", "--n", "4", "--k", "5"]), 2);
    assert_eq!(exit_code(&["mixing", "--n", "4", "--set", "1"]), 2);
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"n": 4, "colour": "red"}"#).unwrap();
    assert_eq!(
        exit_code(&["spectrum", "--config", config.to_str().unwrap()]),
        2
    );
}

#[test]
fn capacity_refusals_exit_3() {
    assert_eq!(exit_code(&["verify", "--n", "9"]), 3);
    assert_eq!(exit_code(&["spectrum", "--n", "100", "--k", "1"]), 3);
}

#[test]
fn capacity_override_warns() {
    let out = Command::new(env!("CARGO_BIN_EXE_jmshuffle"))
        .args(["spectrum", "--n", "3", "--k", "1"])
        .env("SHUFFLE_CAPACITY_OVERRIDE", "4")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("WARNING"));
}
