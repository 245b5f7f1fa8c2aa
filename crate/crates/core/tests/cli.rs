use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certreal"))
        .args(args)
        .env_remove("CERTREAL_FUEL")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

#[test]
fn report_has_the_documented_shape() {
    let (code, v) = json(&["ivt", "--expr", "x*x - 1/2", "-k", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "ivt");
    assert_eq!(v["inputs"]["expr"], "x*x - 1/2");
    assert_eq!(v["precision_k"], 100);
    assert_eq!(v["certificate"]["kind"], "residual");
    assert_eq!(v["certificate"]["ok"], true);
    let num: f64 = v["result"]["num"].as_str().unwrap().parse().unwrap();
    let den: f64 = v["result"]["den"].as_str().unwrap().parse().unwrap();
    assert!((num / den - 0.5f64.sqrt()).abs() < 0.01);
}

#[test]
fn every_subcommand_certifies() {
    let cases: &[(&[&str], &str)] = &[
        (&["evt", "--expr", "min(x, 1 - x)", "-k", "64"], "dominance"),
        (&["integrate", "--expr", "x*x*x", "-k", "1000"], "oracle-agreement"),
        (&["integrate", "--expr", "sqrt(x + 1)", "-k", "50"], "self-agreement"),
        (&["sup", "--points", "1/3,0.5,-2", "-k", "100"], "oracle-agreement"),
        (&["fan-modulus", "--functional", "value3"], "cylinder-check"),
        (&["theta", "--functional", "pointer"], "scf"),
        (&["wkl-path", "--tree", "starts-with-1", "--fuel", "6"], "membership"),
        (&["grilliot", "--mode", "rie", "--seq", "2,0"], "oracle-agreement"),
        (&["demo", "riemann-jump", "-m", "3"], "gap"),
    ];
    for (args, kind) in cases {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(v["certificate"]["kind"], *kind, "{args:?}");
        assert_eq!(v["certificate"]["ok"], true, "{args:?}");
    }
}

#[test]
fn results_match_known_values() {
    let (_, v) = json(&["sup", "--points", "1/3,0.5,-2", "-k", "100"]);
    assert_eq!((v["result"]["num"].as_str(), v["result"]["den"].as_str()), (Some("1"), Some("2")));
    let (_, v) = json(&["integrate", "--expr", "x*x*x", "-k", "1000"]);
    let q: f64 = v["result"]["num"].as_str().unwrap().parse::<f64>().unwrap()
        / v["result"]["den"].as_str().unwrap().parse::<f64>().unwrap();
    assert!((q - 0.25).abs() < 1e-3);
    let (_, v) = json(&["grilliot", "--mode", "dif", "--seq", "3,1,1,0"]);
    assert_eq!(v["detail"]["found"], 3);
    let (_, v) = json(&["grilliot", "--mode", "mpc", "--seq", "1,1"]);
    assert_eq!(v["detail"]["found"], Value::Null);
    let (_, v) = json(&["wkl-path", "--tree", "starts-with-1", "--fuel", "3"]);
    // leftmost path 100
    assert_eq!((v["result"]["num"].as_str(), v["result"]["den"].as_str()), (Some("1"), Some("2")));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["ivt"]), 1);
    assert_eq!(code(&["ivt", "--expr", "y"]), 1);
    assert_eq!(code(&["ivt", "--expr", "1/x"]), 1);
    assert_eq!(code(&["ivt", "--expr", "x", "--interval", "1,0"]), 1);
    assert_eq!(code(&["ivt", "--expr", "x + 1"]), 2);
    assert_eq!(code(&["ivt", "--expr", "1/(x : 1)"]), 2);
    assert_eq!(code(&["fan-modulus", "--functional", "first-one", "--fuel", "12"]), 3);
    assert_eq!(code(&["wkl-path", "--tree", "empty", "--fuel", "3"]), 2);
    assert_eq!(code(&["demo", "riemann-jump", "-m", "1"]), 2);
}

#[test]
fn errors_go_to_stderr_with_columns() {
    let out = run(&["ivt", "--expr", "x +"]);
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("column 3"), "{err}");
}

#[test]
fn fuel_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_certreal"))
        .args(["fan-modulus", "--functional", "first-one"])
        .env("CERTREAL_FUEL", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_is_byte_deterministic() {
    for args in [
        &["evt", "--expr", "exp(x)*(1 - x)", "-k", "16", "--json"][..],
        &["theta", "--functional", "value3", "--json"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn text_output_is_readable() {
    let out = run(&["integrate", "--expr", "x", "-k", "10"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("integrate"), "{s}");
    assert!(s.contains("certificate: oracle-agreement ok"), "{s}");
}
