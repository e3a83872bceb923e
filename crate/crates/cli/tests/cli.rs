use std::io::Write;
use std::process::Command;

use lpdo_cli::{format_poly, parse_poly, run};
use lpdo_core::poly::{Poly2, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn lpdo(args: &[&str]) -> lpdo_cli::Outcome {
    run(std::iter::once("lpdo").chain(args.iter().copied()))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn golden_certify_default() {
    let out = lpdo(&["certify"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, golden("certify_default.txt"));
    let json = lpdo(&["certify", "--format", "json"]);
    assert_eq!(json.code, 0);
    assert_eq!(json.stdout, golden("certify_default.json"));
}

#[test]
fn golden_family() {
    let out = lpdo(&["family", "--c3", "2", "--c2", "3", "--c1", "5", "--d1", "1", "--root", "-1"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, golden("family_example.txt"));
}

#[test]
fn golden_residual() {
    let out = lpdo(&["residual", "--a10", "x", "--a01", "y", "--root", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, golden("residual_example.txt"));
}

#[test]
fn binary_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_lpdo"))
        .args(["residual", "--a10", "x", "--a01", "y", "--root", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("residual_example.txt"));

    let bad = Command::new(env!("CARGO_BIN_EXE_lpdo")).args(["certify", "--a00", "x^-1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(65));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8(bad.stderr).unwrap().contains("exponent"));
}

#[test]
fn exit_statuses_follow_certificates() {
    // |x + y| reaches 2 only on the boundary corner: inside with margin 0 at eps = 2.
    assert_eq!(lpdo(&["certify", "--a00", "x + y", "--eps", "2"]).code, 0);
    // An interior value of 2 violates.
    assert_eq!(lpdo(&["certify", "--a00", "2 - x^2"]).code, 1);
    // x^4 tends to eps = 1 only at the boundary, so enclosures never settle the edge cells.
    let unknown = lpdo(&["certify", "--a00", "x^4", "--depth", "3"]);
    assert_eq!(unknown.code, 2, "{}", unknown.stdout);
    assert!(unknown.stdout.contains("unknown"));
    assert_eq!(lpdo(&["exact"]).code, 0);
    assert_eq!(lpdo(&["exact", "--a00", "1"]).code, 1);
    assert_eq!(lpdo(&["sufficient"]).code, 0);
    assert_eq!(lpdo(&["sufficient", "--a00", "3"]).code, 1);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(lpdo(&[]).code, 64);
    assert_eq!(lpdo(&["frobnicate"]).code, 64);
    assert_eq!(lpdo(&["certify", "--format", "xml"]).code, 64);
    assert_eq!(lpdo(&["certify", "--depth", "-1"]).code, 64);
    let e = lpdo(&["certify", "--a10", "2 x"]);
    assert_eq!(e.code, 65);
    assert!(e.stderr.contains("position 2"), "{}", e.stderr);
    assert_eq!(lpdo(&["certify", "--eps", "0"]).code, 65);
    assert_eq!(lpdo(&["certify", "--m", "-1"]).code, 65);
    assert_eq!(lpdo(&["certify", "--eps", "0.5"]).code, 65);
    assert_eq!(lpdo(&["certify", "--eps", "0.5", "--decimal-as-rational"]).code, 0);
    assert_eq!(lpdo(&["residual", "--root", "2"]).code, 65);
    // x^2 + y^2 has no real characteristic roots.
    assert_eq!(lpdo(&["residual", "--a02", "1"]).code, 65);
    assert_eq!(lpdo(&["residual", "--a20", "0"]).code, 65);
    assert_eq!(lpdo(&["family", "--root", "2"]).code, 65);
}

#[test]
fn general_symbols_are_accepted() {
    // 2 z^2 - z - 1 = (2z + 1)(z - 1): roots -1/2 and 1.
    let out = lpdo(&["residual", "--a20", "2", "--a11", "-1", "--a02", "-1", "--a10", "x"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("omega = -1/2\n"));
    assert!(out.stdout.contains("omega = 1\n"));
}

#[test]
fn json_is_deterministic_and_schema_shaped() {
    let args = ["certify", "--a10", "x + 1/3*y", "--a01", "y - 2", "--a00", "x*y", "--format", "json", "--grid", "7"];
    let first = lpdo(&args);
    for _ in 0..3 {
        assert_eq!(lpdo(&args).stdout, first.stdout);
    }
    let v: serde_json::Value = serde_json::from_str(&first.stdout).unwrap();
    let params = v["parameters"].as_object().unwrap();
    for k in ["eps", "m", "n"] {
        assert!(params[k].is_string());
    }
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[0]["omega"], "-1");
    assert_eq!(roots[1]["omega"], "1");
    for root in roots {
        assert!(root["residual"].is_string());
        assert!(root["exact"].is_boolean());
        let cert = &root["certificate"];
        match cert["kind"].as_str().unwrap() {
            "inside" => assert!(cert["margin"].is_string()),
            "violated" => {
                assert_eq!(cert["witness"].as_array().unwrap().len(), 2);
                assert!(cert["value"].is_string());
            }
            "unknown" => assert!(cert["gap"].is_string()),
            other => panic!("unexpected kind {other}"),
        }
        let s = &root["sufficient"];
        assert!(s["theorem1"].is_boolean() || s["theorem1"] == "n/a");
        assert!(s["triangle"].is_boolean());
    }
    // Keys come out sorted.
    let keys: Vec<&String> = roots[0].as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(first.stdout.find("\"certificate\"").unwrap() < first.stdout.find("\"omega\"").unwrap());
}

#[test]
fn batch_input_runs_each_line() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# comment").unwrap();
    writeln!(f, "--a10 x --a01 y --root 1").unwrap();
    writeln!(f).unwrap();
    writeln!(f, "--a10 'x + y' --root -1").unwrap();
    let path = f.path().to_str().unwrap();
    let out = lpdo(&["residual", "--input", path]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.matches("omega =").count(), 2);
    assert!(out.stdout.starts_with(&golden("residual_example.txt")));

    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "--a00 '2 - x^2'").unwrap();
    writeln!(g, "--a00 0").unwrap();
    let out = lpdo(&["certify", "--input", g.path().to_str().unwrap()]);
    assert_eq!(out.code, 1);

    let mut h = tempfile::NamedTempFile::new().unwrap();
    writeln!(h, "--a10 'x +").unwrap();
    let out = lpdo(&["residual", "--input", h.path().to_str().unwrap()]);
    assert_eq!(out.code, 65);
    assert!(out.stderr.contains("line 1"));
    assert_eq!(lpdo(&["residual", "--input", "/nonexistent/batch"]).code, 65);
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn poly_deg4() -> impl Strategy<Value = Poly2> {
    prop::collection::vec(((0u32..=4, 0u32..=4), coefficient()), 0..=15).prop_map(|terms| {
        Poly2::from_terms(terms.into_iter().filter(|((i, j), _)| i + j <= 4).map(|((i, j), c)| (i, j, c)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_format_round_trip(p in poly_deg4()) {
        let text = format_poly(&p);
        prop_assert_eq!(parse_poly(&text).unwrap(), p);
    }
}
