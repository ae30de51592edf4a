use std::path::PathBuf;
use std::process::{Command, Output};

fn family(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wronsk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn wronsk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wronsk")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn field_flag_overrides_header() {
    let p = family("over_q.fam", "field: Q\n1; x^3\n");
    let q = wronsk(&["certify", p.to_str().unwrap()]);
    assert_eq!(q.status.code(), Some(0));
    let f3 = wronsk(&["certify", p.to_str().unwrap(), "--field", "Fp:3"]);
    assert_eq!(f3.status.code(), Some(20), "{}", stdout(&f3));
    assert!(stdout(&f3).contains("CharPCaveat"));
}

#[test]
fn full_expansion_rescues_char_p() {
    // leading monomials 1 and x^5 collide mod 5, but W = x^5 (6 x^5 = x^5 in GF(5))
    let p = family("rescue.fam", "field: Fp:5\n1; x^5 + x^6\n");
    let o = wronsk(&["certify", p.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"]["source"], "full_expansion");
}

#[test]
fn precision_flag_truncates_and_weakens_the_verdict() {
    let p = family("geom.fam", "1/(1-x); 1 + x + x^2\n");
    let exact = wronsk(&["certify", p.to_str().unwrap()]);
    assert_eq!(exact.status.code(), Some(0), "{}", stdout(&exact));
    let low = wronsk(&["certify", p.to_str().unwrap(), "--prec", "3"]);
    let text = stdout(&low);
    // the two agree below x^3; the exact check rejects the vector, so only
    // dependence up to the forced precision is claimed
    assert_eq!(low.status.code(), Some(10), "{text}");
    assert!(text.starts_with("verdict: DependentUpToPrecision\n"));
}

#[test]
fn truncated_series_give_dependent_up_to_precision() {
    let p = family("trunc.fam", "1/(1-x) @prec=3; 1 + x + x^2\n");
    let o = wronsk(&["certify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).starts_with("verdict: DependentUpToPrecision\n"));
}

#[test]
fn vars_flag_switches_to_multivariate() {
    let p = family("mv.fam", "1; x1; x2\n");
    let o = wronsk(&["certify", p.to_str().unwrap(), "--vars", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("operators: (id, D1, D2)"));
}

#[test]
fn closed_form_rejects_non_monomials() {
    let p = family("nonmono.fam", "x + 1; x^2\n");
    let o = wronsk(&["wronskian", p.to_str().unwrap(), "--closed-form"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn closed_form_with_collision_prints_zero() {
    let p = family("collide.fam", "2*x^3; -x^3\n");
    let o = wronsk(&["wronskian", p.to_str().unwrap(), "--closed-form"]);
    assert_eq!(stdout(&o), "V=0, exp=5, coeff=-2 → 0\n");
}

#[test]
fn genwronsk_json_lines() {
    let p = family("gjson.fam", "vars: 2\n1; x1; x2\n");
    let o = wronsk(&["genwronsk", p.to_str().unwrap(), "--json"]);
    let line = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert_eq!(v["ops"], serde_json::json!([[0, 0], [1, 0], [0, 1]]));
    assert_eq!(v["value"], "1");
}

#[test]
fn enumerate_count_only_depends_on_shape() {
    let o = wronsk(&["genwronsk", "--enumerate-only", "--size", "4", "--vars", "3"]);
    // 1 * 4 * 10 * 20
    assert!(stdout(&o).ends_with("count: 800\n"));
    assert_eq!(stdout(&o).lines().count(), 801);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wronsk(&["certify"]).status.code(), Some(2));
    assert_eq!(wronsk(&["frobnicate"]).status.code(), Some(2));
    let p = family("any.fam", "1\n");
    assert_eq!(wronsk(&["certify", p.to_str().unwrap(), "--field", "Fp:4"]).status.code(), Some(2));
}
