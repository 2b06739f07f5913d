use std::f64::consts::PI;
use std::process::{Command, Output};

use gylat::vacuum::vacuum_energy;
use gylat::{transfer, BoundaryCondition, LatticeSpec, Potential};
use serde_json::Value;

fn gylat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gylat")).args(args).output().expect("binary runs")
}

fn gylat_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gylat"))
        .args(args)
        .env("GYLAT_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn golden_reports() {
    let cases: [(&[&str], &str); 3] = [
        (&["det", "--bc", "dirichlet", "--nu", "3", "--h", "1"], include_str!("golden/det_dirichlet_3.json")),
        (&["casimir", "--bc", "periodic", "--nu", "4"], include_str!("golden/casimir_periodic_4.json")),
        (
            &["sums", "--bc", "dirichlet", "--nu", "9", "--h", "1", "--format", "csv"],
            include_str!("golden/sums_dirichlet_9.csv"),
        ),
    ];
    for (args, golden) in cases {
        let out = gylat(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden, "{args:?}");
    }
}

#[test]
fn det_matches_library() {
    let out = gylat(&["det", "--bc", "dirichlet", "--nu", "3", "--h", "1"]);
    let v = json_of(&out);
    assert_eq!(num(&v["value"]), 4.0);
    assert_eq!(v["closed_form"]["agrees"], Value::Bool(true));

    let out = gylat(&["det", "--bc", "robin", "--alpha", "0.5", "--beta", "-0.25", "--nu", "7", "--h", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let spec = LatticeSpec::interval(7, 0.5).unwrap();
    let bc = BoundaryCondition::Robin { alpha: 0.5, beta: -0.25 };
    let direct = transfer::determinant(&Potential::zeros(7), &bc, &spec, false).unwrap();
    assert_eq!(num(&v["value"]), direct.value());
}

#[test]
fn zero_modes_are_reported() {
    let v = json_of(&gylat(&["det", "--bc", "neumann", "--nu", "4", "--h", "1"]));
    assert_eq!(v["sign"], 0);
    assert!(v["hint"].as_str().unwrap().contains("--prime"));
    let primed = json_of(&gylat(&["det", "--bc", "neumann", "--nu", "4", "--h", "1", "--prime"]));
    assert!((num(&primed["value"]) - 4.0).abs() < 1e-12);
    assert_eq!(primed["zero_modes"], 1);

    let out = gylat(&["det", "--bc", "dirichlet", "--nu", "5", "--h", "1", "--delta-site", "2", "--delta-v", "-0.75"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["sign"], 0);
}

#[test]
fn sums_and_casimir_values() {
    let v = json_of(&gylat(&["sums", "--bc", "dirichlet", "--nu", "9", "--h", "1"]));
    assert!((num(&v["sums"][0]["sum"]) - 16.5).abs() < 1e-12);
    let v = json_of(&gylat(&["casimir", "--bc", "periodic", "--nu", "4"]));
    let spec = LatticeSpec::with_length(4, 2.0 * PI, gylat::Topology::Circle).unwrap();
    let direct = vacuum_energy(&Potential::zeros(4), &BoundaryCondition::Periodic, &spec).unwrap();
    assert_eq!(num(&v["energy"]), direct);
    assert!((direct - 1.53694).abs() < 1e-5);
}

#[test]
fn limit_reports_order_two() {
    let out = gylat(&["limit", "--bc", "dirichlet", "--mass", "1", "--L", "1", "--nu", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!((num(&v["target"]) - 1f64.sinh()).abs() < 1e-15);
    assert!(num(&v["rel_error"]) <= 1e-3);
    assert!((num(&v["observed_order"]) - 2.0).abs() < 0.05);
}

#[test]
fn casimir_sweep_extracts_constant() {
    let out = gylat(&["casimir", "--bc", "dirichlet", "--L", "1", "--nu", "10", "--sweep", "h:0.001:0.01:9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!((num(&v["expansion"]["constant"]) + PI / 24.0).abs() < 1e-4);
}

#[test]
fn sweeps_are_deterministic_across_thread_counts() {
    let args = ["det", "--bc", "twisted", "--tau", "0.3", "--nu", "4", "--sweep", "nu:4:64:5"];
    let one = gylat_env(&args, "1");
    let four = gylat_env(&args, "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let v = json_of(&one);
    let nus: Vec<u64> = v["points"].as_array().unwrap().iter().map(|p| p["nu"].as_u64().unwrap()).collect();
    assert_eq!(nus, vec![4, 8, 16, 32, 64]);
}

#[test]
fn inline_potential_and_exact_polynomial() {
    let out = gylat(&["det", "--bc", "dirichlet", "--nu", "3", "--potential", "[0, 1, 0]", "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let coeffs: Vec<&str> = v["char_poly"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["8", "-14", "7", "-1"]);
    assert!((num(&v["value"]) - 8.0).abs() < 1e-13);
}

#[test]
fn configuration_errors_exit_two() {
    let bad: [&[&str]; 6] = [
        &["det", "--bc", "dirichlet", "--nu", "3", "--h", "1", "--L", "4"],
        &["det", "--bc", "nonsense", "--nu", "3"],
        &["det", "--bc", "dirichlet", "--nu", "3", "--potential", "[1, 2]"],
        &["det", "--bc", "dirichlet", "--nu", "3", "--mass", "-1"],
        &["det", "--bc", "dirichlet", "--nu", "3", "--potential", "[0.5, 0, 0]", "--exact"],
        &["sums", "--bc", "neumann", "--nu", "4"],
    ];
    for args in bad {
        let out = gylat(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn chebyshev_self_test_passes() {
    let out = gylat(&["chebyshev"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["passed"], Value::Bool(true));
}

#[test]
fn consistency_failures_map_to_exit_three() {
    let err = gylat_cli::CliError::Consistency { report: Value::Null, message: String::new() };
    assert_eq!(err.exit_code(), 3);
    assert_eq!(gylat_cli::CliError::Config(String::new()).exit_code(), 2);
}
