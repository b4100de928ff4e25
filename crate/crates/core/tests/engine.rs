mod common;

use std::collections::HashMap;

use common::*;
use fuzzclime::{defuzzify_centroid, parse_config, FuzzyError, FuzzyValue, Registry};
use proptest::prelude::*;

fn registry() -> Registry {
    Registry::bundled()
}

#[test]
fn bundled_config_shape() {
    let reg = registry();
    let names: Vec<&str> = reg.variables().iter().map(|v| v.name()).collect();
    assert_eq!(names, ["humidity", "outdoor", "apparent", "indoor", "action"]);
    assert_eq!(reg.rulebase("apparent_temperature").unwrap().rules().len(), 35);
    assert_eq!(reg.rulebase("action").unwrap().rules().len(), 49);
    assert!(reg.rulebases().iter().all(|rb| rb.is_complete()));

    // temperature variables share one definition
    let outdoor = reg.variable("outdoor").unwrap();
    for name in ["apparent", "indoor"] {
        assert_eq!(reg.variable(name).unwrap().terms(), outdoor.terms());
    }
}

#[test]
fn bundled_shapes_match_reference() {
    let reg = registry();
    let check = |var: &str, terms: &[&str], shapes: &[[f64; 4]]| {
        let v = reg.variable(var).unwrap();
        let got: Vec<(&str, [f64; 4])> =
            v.terms().iter().map(|t| (t.name.as_str(), t.mf.breakpoints())).collect();
        let want: Vec<(&str, [f64; 4])> = terms.iter().copied().zip(shapes.iter().copied()).collect();
        assert_eq!(got, want, "{var}");
    };
    check("humidity", &HUMIDITY_TERMS, &HUMIDITY_SHAPES);
    check("outdoor", &TEMPERATURE_TERMS, &TEMPERATURE_SHAPES);
    check("action", &ACTION_TERMS, &ACTION_SHAPES);
}

#[test]
fn fuzzify_examples() {
    let reg = registry();
    let temp = reg.variable("outdoor").unwrap();
    let fv = temp.fuzzify(16.0);
    for (t, d) in fv.iter() {
        let want = match t {
            "low" | "normal" => 0.5,
            _ => 0.0,
        };
        assert_eq!(d, want, "{t}");
    }

    let fv = reg.variable("humidity").unwrap().fuzzify(66.0);
    for (t, d) in fv.iter() {
        let want = match t {
            "normal" => 0.4,
            "high" => 0.6,
            _ => 0.0,
        };
        assert!((d - want).abs() < 1e-12, "{t}: {d}");
    }

    let fv = temp.fuzzify(-15.0);
    assert_eq!(fv.degree("extremely_low"), 1.0);
    assert_eq!(fv.max_degree(), 1.0);
    assert_eq!(fv.iter().filter(|(_, d)| *d > 0.0).count(), 1);
}

fn single(term: &str) -> FuzzyValue {
    FuzzyValue::new([(term, 1.0)]).unwrap()
}

#[test]
fn apparent_rule_examples() {
    let reg = registry();
    let rb = reg.rulebase("apparent_temperature").unwrap();
    let eval = |h: &str, t: &str| {
        rb.evaluate(&HashMap::from([
            ("humidity".to_string(), single(h)),
            ("outdoor".to_string(), single(t)),
        ]))
        .unwrap()
    };
    let out = eval("very_high", "high");
    assert_eq!(out.degree("extremely_high"), 1.0);
    assert_eq!(out.iter().filter(|(_, d)| *d > 0.0).count(), 1);
    let out = eval("low", "low");
    assert_eq!(out.degree("low"), 1.0);
    assert_eq!(out.iter().filter(|(_, d)| *d > 0.0).count(), 1);

    let zero = rb
        .evaluate(&HashMap::from([
            ("humidity".to_string(), FuzzyValue::default()),
            ("outdoor".to_string(), FuzzyValue::default()),
        ]))
        .unwrap();
    assert!(zero.is_all_zero());
    assert_eq!(zero.iter().count(), 7);
}

#[test]
fn missing_input_is_a_configuration_error() {
    let reg = registry();
    let err = reg
        .rulebase("action")
        .unwrap()
        .evaluate(&HashMap::from([("indoor".to_string(), single("low"))]))
        .unwrap_err();
    assert!(matches!(err, FuzzyError::MissingInput { .. }));
}

#[test]
fn centroid_examples() {
    let reg = registry();
    let action = reg.variable("action").unwrap();
    let c = defuzzify_centroid(action, &single("no_system"), 0.1).unwrap();
    assert!((c - 20.0).abs() < 0.1, "{c}");

    let fv = FuzzyValue::new([("heat_normal", 0.5), ("no_system", 0.5)]).unwrap();
    let c = defuzzify_centroid(action, &fv, 0.1).unwrap();
    assert!(c > 15.0 && c < 20.0);
    assert!((c - ORACLE_ACTION_HALF_HEAT_HALF_OFF).abs() < 0.05, "{c}");

    // sanity: the oracle reproduces its own frozen value
    let degrees = [0.0, 0.5, 0.5, 0.0, 0.0];
    let o = oracle_centroid(&ACTION_SHAPES, &degrees, 0.0, 40.0, 0.001);
    assert!((o - ORACLE_ACTION_HALF_HEAT_HALF_OFF).abs() < 1e-9);

    assert_eq!(
        defuzzify_centroid(action, &FuzzyValue::default(), 0.1).unwrap_err(),
        FuzzyError::NoRuleFired("action".into())
    );
}

#[test]
fn parse_errors() {
    assert_eq!(parse_config("").unwrap_err(), FuzzyError::NoVariables);
    let broken = fuzzclime::config::BUNDLED_CONFIG.replacen(
        "if humidity is low and outdoor is low then apparent is low",
        "if humidity is low and outdoor is medium then apparent is low",
        1,
    );
    let err = parse_config(&broken).unwrap_err();
    assert_eq!(
        err.root(),
        &FuzzyError::UnknownTerm {
            variable: "outdoor".into(),
            term: "medium".into()
        }
    );
    assert!(err.to_string().contains("`medium`"));
}

#[test]
fn bundled_file_on_disk_matches_embedded_copy() {
    let on_disk = std::fs::read_to_string(config_path()).unwrap();
    assert_eq!(on_disk, fuzzclime::config::BUNDLED_CONFIG);
}

#[test]
fn serialized_bundled_config_round_trips() {
    let reg = registry();
    let text = reg.to_config_string();
    let again = parse_config(&text).unwrap();
    assert_eq!(reg, again);
    assert_eq!(again.to_config_string(), text);
}

#[test]
fn evaluation_is_deterministic() {
    let reg = registry();
    let rb = reg.rulebase("apparent_temperature").unwrap();
    let run = || {
        let inputs = HashMap::from([
            ("humidity".to_string(), reg.variable("humidity").unwrap().fuzzify(63.3)),
            ("outdoor".to_string(), reg.variable("outdoor").unwrap().fuzzify(23.1)),
        ]);
        let out = rb.evaluate(&inputs).unwrap();
        defuzzify_centroid(reg.variable("apparent").unwrap(), &out, 0.1).unwrap()
    };
    assert_eq!(run().to_bits(), run().to_bits());
}

fn term_shape() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(0.0f64..100.0).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    })
}

proptest! {
    #[test]
    fn rule_outputs_never_exceed_inputs(
        h in prop::collection::vec(0.0f64..=1.0, 5),
        t in prop::collection::vec(0.0f64..=1.0, 7),
    ) {
        let reg = registry();
        let rb = reg.rulebase("apparent_temperature").unwrap();
        let hv = FuzzyValue::new(HUMIDITY_TERMS.iter().copied().zip(h.iter().copied())).unwrap();
        let tv = FuzzyValue::new(TEMPERATURE_TERMS.iter().copied().zip(t.iter().copied())).unwrap();
        let bound = hv.max_degree().max(tv.max_degree());
        let out = rb.evaluate(&HashMap::from([
            ("humidity".to_string(), hv),
            ("outdoor".to_string(), tv),
        ])).unwrap();
        for (_, d) in out.iter() {
            prop_assert!((0.0..=bound).contains(&d));
        }
    }

    #[test]
    fn centroid_stays_in_universe(d in prop::collection::vec(0.0f64..=1.0, 5), step in 0.01f64..2.0) {
        prop_assume!(d.iter().any(|x| *x > 0.0));
        let reg = registry();
        let action = reg.variable("action").unwrap();
        let fv = FuzzyValue::new(ACTION_TERMS.iter().copied().zip(d.iter().copied())).unwrap();
        let c = defuzzify_centroid(action, &fv, step).unwrap();
        prop_assert!((0.0..=40.0).contains(&c));
    }

    #[test]
    fn generated_configs_round_trip(
        shapes in prop::collection::vec(term_shape(), 1..5),
        complete in any::<bool>(),
    ) {
        // One input variable with random inner terms plus covering shoulders,
        // one output with two terms, and a rule per input term.
        let mut text = String::from("variable x range 0 100\n  term lo_edge shoulder 0 50 100\n  term hi_edge 0 50 100 shoulder\n");
        for (i, [a, b, c, d]) in shapes.iter().enumerate() {
            text.push_str(&format!("  term t{i} {a} {b} {c} {d}\n"));
        }
        text.push_str("variable y range 0 1\n  term no shoulder 0 0 1\n  term yes 0 1 1 shoulder\n");
        text.push_str(&format!("rulebase r inputs x output y{}\n", if complete { " complete" } else { "" }));
        text.push_str("  if x is lo_edge then y is no\n  if x is hi_edge then y is yes\n");
        for i in 0..shapes.len() {
            text.push_str(&format!("  if x is t{i} then y is {}\n", if i % 2 == 0 { "yes" } else { "no" }));
        }
        let reg = parse_config(&text).unwrap();
        let again = parse_config(&reg.to_config_string()).unwrap();
        prop_assert_eq!(reg, again);
    }
}
