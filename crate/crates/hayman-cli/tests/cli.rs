//! CLI-layer tests: expression parser round trips and stability of the JSON
//! report schema.

use hayman_cli::commands::{build_coefficients, cmd_growth, cmd_series, RawInput, NumericOptions};
use hayman_cli::parser::parse_ratfunc;
use hayman_core::poly::Poly;
use hayman_core::ratfunc::RatFunc;
use proptest::prelude::*;

fn q_strategy() -> impl Strategy<Value = hayman_core::Q> {
    (-30i64..=30, 1i64..=9).prop_map(|(n, d)| hayman_core::qr(n, d))
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(q_strategy(), 1..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn ratfunc_strategy() -> impl Strategy<Value = RatFunc> {
    (poly_strategy(4), poly_strategy(4).prop_filter("nonzero", |p| !p.is_zero()))
        .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// parse(print(f)) == f: the canonical printed form re-parses to the
    /// same rational function.
    #[test]
    fn parse_print_round_trip(f in ratfunc_strategy()) {
        let printed = format!("{}", f);
        let back = parse_ratfunc(&printed).expect("printed form parses");
        prop_assert_eq!(back, f);
    }
}

fn raw(a: &str, b: &str, alpha: &str, beta: &str, gamma: &str) -> RawInput {
    let opt = |s: &str| {
        if s.is_empty() {
            None
        } else {
            Some(s.to_string())
        }
    };
    RawInput {
        a: opt(a),
        b: opt(b),
        alpha: opt(alpha),
        beta: opt(beta),
        gamma: opt(gamma),
        ..RawInput::default()
    }
}

fn assert_string(v: &serde_json::Value, path: &str) {
    assert!(v.is_string(), "field {} should be a string, got {}", path, v);
}

/// The JSON report keeps its field names and types: downstream scripts parse
/// it, so presence and types are contract.
#[test]
fn json_schema_stable() {
    let (c, echo) = build_coefficients(&raw("", "", "1", "", "")).unwrap();
    let (report, exit) = cmd_growth(&c, echo);
    assert_eq!(exit, 0);
    let v: serde_json::Value = serde_json::to_value(&report).unwrap();

    let input = &v["input"];
    for key in ["a", "b", "alpha", "beta", "gamma"] {
        assert_string(&input[key], key);
    }
    assert!(input["normalized_from_general_form"].is_boolean());

    let cl = &v["classification"];
    assert!(cl["no_branch"].is_boolean());
    assert_string(&cl["primary"], "classification.primary");
    assert!(cl["branches"].is_array());
    for b in cl["branches"].as_array().unwrap() {
        assert_string(&b["label"], "branch.label");
        assert!(b["data"].is_object());
        assert!(b["verified_identities"].is_array());
        assert!(b["warnings"].is_array());
    }
    assert!(cl["diagnostics"].is_array());

    assert_string(&v["derived"]["cap_b"], "derived.cap_b");

    let g = &v["growth"];
    assert_string(&g["kind"], "growth.kind");
    assert_eq!(g["kind"], "finite-order");
    assert_string(&g["order"], "growth.order");
    assert!(g["order_value"].is_number());
    assert!(g["exact"].is_boolean());
    assert_string(&g["provenance"], "growth.provenance");
    assert!(g["warnings"].is_array());

    let io = &v["infinite_order"];
    assert!(io["scenario1"].is_boolean());
    assert!(io["scenario2"].is_boolean());
    assert!(io["details"].is_array());

    assert!(v["warnings"].is_array());
}

#[test]
fn json_series_schema_stable() {
    let (c, echo) = build_coefficients(&raw("", "", "1", "", "")).unwrap();
    let mut opts = NumericOptions::default();
    opts.n = 12;
    opts.w0 = hayman_core::Complex64::new(2.0, 0.0);
    let (report, exit) = cmd_series(&c, echo, &opts);
    assert_eq!(exit, 0);
    let v: serde_json::Value = serde_json::to_value(&report).unwrap();
    let s = &v["series"];
    assert!(s["z0"].is_array());
    assert_eq!(s["z0"].as_array().unwrap().len(), 2);
    assert!(s["truncation_order"].is_number());
    assert_eq!(s["truncation_order"], 12);
    let coeffs = s["coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 13);
    assert!(coeffs[0].as_array().unwrap()[0].is_number());
    assert!(s["back_substitution_residual"].is_number());
}

/// Spec'd parser behaviors that must not regress.
#[test]
fn parser_fixed_points() {
    let f = parse_ratfunc("-1/(2*z) - 1").unwrap();
    assert_eq!(format!("{}", f), "(-z - 1/2)/(z)");
    let g = parse_ratfunc("(z^2-1)/(z-1)").unwrap();
    assert_eq!(format!("{}", g), "z + 1");
    let h = parse_ratfunc("z^-2").unwrap();
    assert_eq!(format!("{}", h), "(1)/(z^2)");
    assert!(parse_ratfunc("z +").is_err());
    assert!(parse_ratfunc("(z").is_err());
    assert!(parse_ratfunc("z^z").is_err());
}

/// Every built-in catalog entry passes its own checks.
#[test]
fn catalog_all_pass() {
    let results = hayman_cli::catalog::run_catalog();
    for r in &results {
        assert!(r.passed, "catalog entry {} failed: {:?}", r.name, r.details);
    }
    assert_eq!(results.len(), 8);
}
