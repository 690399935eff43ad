//! Property tests for function-model parsing and canonical serialization.

mod common;

use proptest::prelude::*;

use fnkit_core::canonical::value_to_canonical_string;
use fnkit_core::function_model::{
    parse_function_model, serialize_function_model, validate_function_model,
};
use serde_json::Value;

fn permute(value: &Value, rng_seed: usize) -> Value {
    // serde_json maps iterate sorted, so "permuting" means rebuilding the
    // object from a rotated entry list; nested objects are permuted too.
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map
                .iter()
                .map(|(k, v)| (k.clone(), permute(v, rng_seed + 1)))
                .collect();
            if !entries.is_empty() {
                let n = entries.len();
                entries.rotate_left(rng_seed % n);
            }
            let mut out = serde_json::Map::new();
            for (k, v) in entries {
                out.insert(k, v);
            }
            Value::Object(out)
        }
        Value::Array(items) => {
            Value::Array(items.iter().map(|v| permute(v, rng_seed + 1)).collect())
        }
        other => other.clone(),
    }
}

#[test]
fn member_order_does_not_affect_canonical_bytes() {
    for fixture in [
        "function/valid/core_acc.json",
        "function/valid/eco_mpc.json",
        "function/valid/signal_gateway.json",
    ] {
        let text = common::fixture_text(fixture);
        let value: Value = serde_json::from_str(&text).unwrap();
        let canonical = value_to_canonical_string(&value);
        for seed in 1..5 {
            let permuted = permute(&value, seed);
            let permuted_text = serde_json::to_string_pretty(&permuted).unwrap();
            let model = parse_function_model(&permuted_text).unwrap();
            assert_eq!(
                serialize_function_model(&model),
                canonical_of_model(&canonical),
                "{fixture} differs under member permutation"
            );
        }
    }
}

fn canonical_of_model(canonical_input: &str) -> String {
    let model = parse_function_model(canonical_input).unwrap();
    serialize_function_model(&model)
}

#[test]
fn demo_fixtures_roundtrip_and_are_idempotent() {
    for fixture in [
        "function/valid/core_acc.json",
        "function/valid/eco_mpc.json",
        "function/valid/signal_gateway.json",
    ] {
        let text = common::fixture_text(fixture);
        let model = parse_function_model(&text).unwrap();
        let once = serialize_function_model(&model);
        let reparsed = parse_function_model(&once).unwrap();
        assert_eq!(model, reparsed, "{fixture} round-trip changed the model");
        assert_eq!(once, serialize_function_model(&reparsed));
        assert!(validate_function_model(&model).is_valid());
    }
}

#[test]
fn every_enumeration_field_rejects_foreign_literals() {
    let base = common::fixture_text("function/valid/core_acc.json");
    let cases = [
        ("/InterfaceData/0/Role", "Producer"),
        ("/InterfaceData/1/RangeErrorAction", "Hold"),
        ("/InterfaceData/0/AsilInfo", "E"),
        ("/ParameterList/0/Attribute", "Tuned"),
        ("/SchedulingInfo/ImplementedAsil", "ASIL-B"),
        ("/SchedulingInfo/Supervision/SupervisionType", "Heartbeat"),
        ("/InterfaceData/0/Datatype/Numerical/Base", "float16"),
    ];
    for (pointer, literal) in cases {
        let mut value: Value = serde_json::from_str(&base).unwrap();
        *value.pointer_mut(pointer).unwrap() = Value::String(literal.into());
        let result = parse_function_model(&value.to_string());
        assert!(result.is_err(), "{pointer}={literal} must be rejected");
    }
}

proptest! {
    // Random scalar edits that keep the document well-formed must either
    // parse to a model that reserializes canonically, or be rejected -- the
    // parser never accepts without normalizing.
    #[test]
    fn parse_serialize_parse_is_stable(seed in 0u64..500) {
        let text = common::fixture_text("function/valid/core_acc.json");
        let mut value: Value = serde_json::from_str(&text).unwrap();
        // Vary a couple of numeric knobs deterministically from the seed.
        let cycle = 1.0 + (seed % 97) as f64;
        *value.pointer_mut("/SchedulingInfo/CycleTime").unwrap() = Value::from(cycle);
        let offset = (seed % 100) as f64 / 100.0 * (cycle - 0.01);
        *value.pointer_mut("/SchedulingInfo/InitialOffset").unwrap() =
            Value::from((offset * 100.0).round() / 100.0);
        *value.pointer_mut("/SchedulingInfo/DebounceTime").unwrap() =
            Value::from(((seed % 50) as f64 / 50.0 * cycle * 100.0).round() / 100.0);

        if let Ok(model) = parse_function_model(&value.to_string()) {
            let once = serialize_function_model(&model);
            let again = parse_function_model(&once).unwrap();
            prop_assert_eq!(&model, &again);
            prop_assert_eq!(once, serialize_function_model(&again));
        }
    }
}

#[test]
fn reference_closure_holds_for_warning_free_models() {
    // A model whose findings are warning-or-below has no dangling names:
    // walk every reference by hand and cross-check.
    let model = parse_function_model(&common::fixture_text("function/valid/core_acc.json")).unwrap();
    let report = validate_function_model(&model);
    assert!(report.is_valid());

    let declared: std::collections::BTreeSet<&str> =
        model.errors().iter().map(|e| e.name.as_str()).collect();
    for interface in &model.interface_data {
        if let Some(err) = &interface.timeout_error {
            assert!(declared.contains(err.as_str()), "dangling timeout {err}");
        }
    }
    for reaction in model.safety_reactions() {
        for err in &reaction.error_list {
            assert!(declared.contains(err.as_str()), "dangling reaction ref {err}");
        }
    }
}
