use std::process::Command;

use borwein::exact::{parse_rational, Rational};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("borwein").chain(args.iter().copied());
    let code = borwein_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn breakpoint_prints_bare_index() {
    let (code, out, _) = run(&["breakpoint", "--family", "odd-harmonic", "--threshold", "3"]);
    assert_eq!((code, out.as_str()), (0, "55\n"));
    let v = json(&["breakpoint", "--threshold", "2", "--format", "json"]);
    assert_eq!(v["n"], 6);
    assert_eq!(v["threshold"], "2/1");
}

#[test]
fn single_unit_box_integral() {
    let v = json(&["integral", "--betas", "1"]);
    assert_eq!(v["exact"], "1/1");
    assert_eq!(v["decimal"], "1");
    assert_eq!(v["support_radius"], "1/1");
}

#[test]
fn report_schema_field_order() {
    let v = json(&["integral", "--family", "odd-harmonic", "--n", "7"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["command", "spec", "weights", "exact", "decimal", "support_radius", "deficit", "deficit_terms"]
    );
    assert_eq!(v["decimal"], "1");
    let deficit = parse_rational(v["deficit"].as_str().unwrap()).unwrap();
    assert_eq!(borwein::exact::to_decimal(&deficit, 10), "1.470628135e-11");
    assert_eq!(v["deficit_terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["deficit_terms"][0][0], "2/1");
}

#[test]
fn long_weighted_deficit() {
    let v = json(&["deficit", "--family", "odd-harmonic", "--n", "56", "--weights", "1"]);
    assert_eq!(v["decimal"], "1.484870809e-138");
    assert_eq!(v["weights"], 1);
    assert_eq!(v["exact"], v["deficit"]);
}

#[test]
fn deficit_needs_integer_scale() {
    let (code, out, _) = run(&["deficit", "--betas", "1/2,1/3"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "no_unit_identity");
}

#[test]
fn exact_values_are_never_floats() {
    let v = json(&["weighted-integral", "--betas", "1,1/3,1/5", "--weights", "2"]);
    for key in ["exact", "support_radius"] {
        let s = v[key].as_str().unwrap();
        assert!(s.contains('/'), "{key} = {s}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["integral", "--betas", "1,abc"]).0, 2);
    assert_eq!(run(&["integral", "--betas", "0"]).0, 2);
    assert_eq!(run(&["integral", "--unknown"]).0, 2);
    assert_eq!(run(&["integral"]).0, 2);
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["spline-dump", "--betas", "1", "--format", "plain"]).0, 2);
}

#[test]
fn size_guard_exits_three_with_json() {
    let (code, out, err) = run(&["spline-dump", "--family", "odd-harmonic", "--n", "30"]);
    assert_eq!(code, 3);
    assert!(!err.is_empty());
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "size_guard");

    let (code, out, _) = run(&["integral", "--family", "odd-harmonic", "--n", "80", "--node-budget", "1000"]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "exact_path_unavailable");
}

#[test]
fn spline_dump_csv() {
    let (code, out, _) = run(&["spline-dump", "--betas", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "-2/1,0/1,1/1,1/2\n0/1,2/1,1/1,-1/2\n");
}

#[test]
fn point_and_edge_agree_near_the_edge() {
    let p = json(&["point", "--family", "odd-harmonic", "--n", "7", "--x", "2"]);
    let e = json(&["edge", "--family", "odd-harmonic", "--n", "7"]);
    assert_eq!(e["exponent"], 7);
    let field = |v: &Value, k: &str| parse_rational(v[k].as_str().unwrap()).unwrap();
    let x = Rational::from(2);
    assert!(field(&e, "valid_from") < x);
    let gap = field(&e, "radius") - &x;
    let expected = (0..7).fold(field(&e, "coefficient"), |acc, _| acc * &gap);
    assert_eq!(field(&p, "value"), expected);
    let neg = json(&["point", "--betas", "1", "--x", "-1"]);
    assert_eq!(neg["value"], "1/2");
}

#[test]
fn sinc_power_verdicts() {
    let v = json(&["sinc-power", "--m", "1", "--n-max", "7"]);
    assert_eq!(v["last_unit_power"], 5);
}

#[test]
fn lattice_sum_and_lower_bound() {
    let v = json(&["sum", "--scales", "5pi/4,1,1", "--tol", "1e-9"]);
    let value: f64 = v["value"].as_str().unwrap().parse().unwrap();
    assert!((value - 0.8999999997).abs() < 5e-9);
    assert_eq!(v["sidedness"], "one_sided");

    let v = json(&["sum", "--scales", "pi,pi,pi", "--two-sided", "--tol", "1e-6"]);
    let value: f64 = v["value"].as_str().unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-6);

    let v = json(&["lower-bound", "--a0", "1.5", "--rest", "1,0.5", "--tol", "1e-8"]);
    assert_eq!(v["hypothesis_holds"], true);
    assert_eq!(v["sum_analog_holds"], true);
}

#[test]
fn numeric_commands() {
    let v = json(&["numeric-integral", "--scales", "pi,pi", "--rel-tol", "1e-10"]);
    let value: f64 = v["value"].as_str().unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-9);

    let v = json(&["sum-vs-integral", "--scales", "2,1.5,1", "--tol", "1e-7"]);
    assert_eq!(v["hypothesis_holds"], true);
    assert_eq!(v["agree"], true);

    let v = json(&["sum-vs-integral", "--scales", "pi"]);
    assert!(v["note"].is_string());
    assert!(v["lhs"].is_null());

    let v = json(&["kernel-transform", "--omega", "0,-0.5,2", "--tol", "1e-6"]);
    assert_eq!(v["all_within_tol"], true);
}

#[test]
fn precision_flag_is_validated() {
    assert_eq!(run(&["sum", "--scales", "pi,pi,pi", "--precision", "32"]).0, 2);
    let (code, _, _) = run(&["sum", "--scales", "pi,pi,pi", "--precision", "96", "--tol", "1e-6"]);
    assert_eq!(code, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["weighted-integral", "--betas", "1,1/2,1/3,1/5", "--weights", "2"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn tampered_verify_fails() {
    let (code, out, _) = run(&["verify", "--tamper"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL breaking points"), "{out}");
    assert!(out.contains("(expected 56)"));
}

#[test]
fn verify_fast_suite_outcomes() {
    let (code, out, _) = run(&["verify", "--suite", "fast"]);
    let failing: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    // The printed pi-scaled anchors sit more than one unit of their last digit
    // from the true products, so that check cannot pass.
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].starts_with("FAIL pi-scaled decimal anchors"));
    assert_eq!(code, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_borwein");
    let out = Command::new(bin)
        .args(["breakpoint", "--threshold", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "55\n");
    let out = Command::new(bin).args(["integral", "--betas", "1/0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
